//! Degree-truncated Hardy space: coefficient vectors of analytic functions on
//! the disk, cut at degree < order. The inner product is the ℓ² pairing of
//! Taylor coefficients, conjugate-linear in the second slot.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::moebius::DiskPoint;

/// An analytic function represented by its first `order` Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyVector {
    pub coeffs: DVector<Complex64>,
    /// ℓ² mass dropped by the constructor's truncation of an infinite series;
    /// 0 for genuinely polynomial data. Combinators reset it to 0 rather than
    /// propagate estimates they cannot certify.
    pub tail_bound: f64,
}

impl HardyVector {
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        HardyVector { coeffs: DVector::from_vec(coeffs), tail_bound: 0.0 }
    }

    pub fn zeros(order: usize) -> Self {
        HardyVector { coeffs: DVector::zeros(order), tail_bound: 0.0 }
    }

    /// The monomial z^k.
    pub fn monomial(order: usize, k: usize) -> Self {
        let mut v = DVector::zeros(order);
        if k < order {
            v[k] = Complex64::new(1.0, 0.0);
        }
        HardyVector { coeffs: v, tail_bound: 0.0 }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.order() != other.order() {
            return Err(CoreError::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(f, g)| f * g.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        HardyVector { coeffs: self.coeffs.clone() / Complex64::new(n, 0.0), tail_bound: 0.0 }
    }

    /// Horner evaluation at a point of the open disk.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Coefficient mass strictly above the given degree.
    pub fn tail_norm_sq(&self, deg: usize) -> f64 {
        self.coeffs.iter().skip(deg + 1).map(|c| c.norm_sqr()).sum()
    }

    /// Truncated product: (self · other) cut back to self's order.
    pub fn mult(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(CoreError::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(HardyVector { coeffs: conv_trunc(&self.coeffs, &other.coeffs), tail_bound: 0.0 })
    }
}

/// Truncated convolution: first `len(x)` coefficients of the product series.
pub fn conv_trunc(x: &DVector<Complex64>, y: &DVector<Complex64>) -> DVector<Complex64> {
    let n = x.len();
    let mut out = DVector::zeros(n);
    for j in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..=j.min(y.len() - 1) {
            s += x[j - k] * y[k];
        }
        out[j] = s;
    }
    out
}

/// Reproducing kernel at u: coefficients ū^k, so that ⟨f, k_u⟩ = f(u).
pub fn szego_kernel(order: usize, u: DiskPoint) -> HardyVector {
    let ub = u.value().conj();
    let mut v = DVector::zeros(order);
    let mut p = Complex64::new(1.0, 0.0);
    for k in 0..order {
        v[k] = p;
        p *= ub;
    }
    let r = u.modulus();
    let tail = r.powi(order as i32) / (1.0 - r * r).sqrt();
    HardyVector { coeffs: v, tail_bound: tail }
}

/// Taylor series of the disk automorphism (a−z)/(1−āz):
/// c_0 = a, c_1 = −(1−|a|²), c_k = c_{k−1}·ā for k ≥ 2.
pub fn phi_series(order: usize, a: DiskPoint) -> HardyVector {
    let av = a.value();
    let mut v = DVector::zeros(order);
    if order > 0 {
        v[0] = av;
    }
    if order > 1 {
        v[1] = Complex64::new(-(1.0 - av.norm_sqr()), 0.0);
    }
    for k in 2..order {
        v[k] = v[k - 1] * av.conj();
    }
    let mut out = HardyVector { coeffs: v, tail_bound: 0.0 };
    out.tail_bound = unit_tail(&out);
    out
}

/// First `order` Taylor coefficients of φ_b(z)^k, by iterated truncated
/// squaring of the degree-one series. The full power has unit norm, so the
/// recorded tail bound is the exact dropped mass.
pub fn moebius_power(order: usize, b: DiskPoint, k: u32) -> HardyVector {
    if k == 0 {
        return HardyVector::monomial(order, 0);
    }
    let base = phi_series(order, b);
    let mut acc = base.coeffs.clone();
    for _ in 1..k {
        acc = conv_trunc(&acc, &base.coeffs);
    }
    let mut out = HardyVector { coeffs: acc, tail_bound: 0.0 };
    out.tail_bound = unit_tail(&out);
    out
}

/// √(1−‖trunc(f)‖²) for a unit-norm function f: the exact ℓ² mass lost to
/// truncation, up to the measurement floor of the kept-mass sum. Clamped at
/// zero against roundoff above 1.
pub fn unit_tail(f: &HardyVector) -> f64 {
    let kept: f64 = f.coeffs.iter().map(|c| c.norm_sqr()).sum();
    (1.0 - kept).max(0.0).sqrt()
}

/// Resolution limit of `unit_tail`: summing `order` unit-scale squares leaves
/// roundoff ~order·ε in the kept mass, so tails below √(order·ε) read as 0.
/// Certified bounds built from measured tails must add this floor.
pub fn tail_noise_floor(order: usize) -> f64 {
    (order as f64 * f64::EPSILON).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::MoebiusMap;

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn monomials_orthonormal() {
        let e2 = HardyVector::monomial(8, 2);
        let e5 = HardyVector::monomial(8, 5);
        assert_eq!(e2.inner(&e2).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(e2.inner(&e5).unwrap(), Complex64::new(0.0, 0.0));
        assert!(matches!(
            e2.inner(&HardyVector::monomial(9, 2)),
            Err(CoreError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn szego_reproduces_evaluation() {
        let u = dp(0.4, -0.3);
        let k = szego_kernel(64, u);
        let f = HardyVector::from_coeffs(
            (0..64)
                .map(|j| Complex64::new(1.0 / (1.0 + j as f64), 0.3 / (2.0 + j as f64)))
                .collect(),
        );
        let lhs = f.inner(&k).unwrap();
        assert!((lhs - f.evaluate(u.value())).norm() < 1e-14);
    }

    #[test]
    fn szego_pair_matches_closed_form() {
        let u = dp(0.5, 0.1);
        let v = dp(-0.2, 0.3);
        let n = 256;
        let ip = szego_kernel(n, u).inner(&szego_kernel(n, v)).unwrap();
        let exact = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - u.value().conj() * v.value());
        // remainder is geometric with ratio |u||v| < 0.36
        assert!((ip - exact).norm() < 1e-15);
    }

    #[test]
    fn phi_series_evaluates_to_map() {
        let a = dp(0.3, 0.2);
        let s = phi_series(512, a);
        let m = MoebiusMap::reflection(a);
        for z in [Complex64::new(0.2, 0.0), Complex64::new(-0.1, 0.25)] {
            let exact = m.eval(z).unwrap();
            assert!((s.evaluate(z) - exact).norm() < 1e-13);
        }
    }

    #[test]
    fn phi_series_is_unit_up_to_tail() {
        // the full series has unit H² norm: |a|² + (1-|a|²)² Σ |a|^{2k} = 1
        let a = dp(0.6, 0.0);
        let s = phi_series(2048, a);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        let short = phi_series(32, a);
        let tail = unit_tail(&short);
        assert!(tail > 0.0 && tail < 1.0);
        let direct: f64 = s.coeffs.iter().skip(32).map(|c| c.norm_sqr()).sum();
        assert!((tail * tail - direct).abs() < 1e-14);
    }

    #[test]
    fn conv_trunc_matches_polynomial_product() {
        let x = HardyVector::from_coeffs(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, -1.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.3, 0.0),
        ]);
        let y = HardyVector::from_coeffs(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 0.0),
        ]);
        let p = x.mult(&y).unwrap();
        let z = Complex64::new(0.17, 0.05);
        // degree cutoff keeps terms below z^4; compare against explicit product there
        let full = x.evaluate(z) * y.evaluate(z);
        let dropped = (0..4)
            .flat_map(|j| (0..4).map(move |k| (j, k)))
            .filter(|(j, k)| j + k >= 4)
            .map(|(j, k)| x.coeffs[j] * y.coeffs[k] * z.powu((j + k) as u32))
            .sum::<Complex64>();
        assert!((p.evaluate(z) - (full - dropped)).norm() < 1e-14);
    }

    #[test]
    fn evaluate_geometric_series() {
        let f = HardyVector::from_coeffs(vec![Complex64::new(1.0, 0.0); 200]);
        let z = Complex64::new(0.5, 0.0);
        assert!((f.evaluate(z) - Complex64::new(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn moebius_power_base_cases() {
        let b = dp(0.6, 0.0);
        let p0 = moebius_power(16, b, 0);
        assert_eq!(p0, HardyVector::monomial(16, 0));

        let p1 = moebius_power(16, b, 1);
        assert!((p1.coeffs[0] - Complex64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((p1.coeffs[1] - Complex64::new(-0.64, 0.0)).norm() < 1e-15);
        assert!((p1.coeffs[2] - Complex64::new(-0.64 * 0.6, 0.0)).norm() < 1e-15);
        assert!((p1.coeffs[3] - Complex64::new(-0.64 * 0.36, 0.0)).norm() < 1e-15);

        let b3 = dp(0.3, 0.0);
        let sq = moebius_power(64, b3, 2);
        let lin = moebius_power(64, b3, 1);
        let prod = lin.mult(&lin).unwrap();
        assert!((&sq.coeffs - &prod.coeffs).norm() < 1e-14);
    }

    #[test]
    fn moebius_power_matches_pointwise() {
        // |f(z) - p(z)| = |Σ_{j≥N} c_j z^j| ≤ tail · |z|^N / √(1-|z|²)
        let order = 96;
        let mut state = 0x9e3779b9u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..16 {
            let b = DiskPoint::from_re_im(0.6 * (next() - 0.5), 0.6 * (next() - 0.5)).unwrap();
            let z = Complex64::new(0.7 * (next() - 0.5), 0.7 * (next() - 0.5));
            let k = 1 + (next() * 6.0) as u32;
            let p = moebius_power(order, b, k);
            let m = MoebiusMap::reflection(b);
            let exact = m.eval(z).unwrap().powu(k);
            let zr = z.norm();
            let bound = p.tail_bound * zr.powi(order as i32) / (1.0 - zr * zr).sqrt();
            assert!((p.evaluate(z) - exact).norm() <= bound + 1e-13);
        }
    }

    #[test]
    fn szego_tail_bound_is_sound() {
        let u = dp(0.7, 0.1);
        let short = szego_kernel(48, u);
        let long = szego_kernel(2048, u);
        let dropped: f64 =
            long.coeffs.iter().skip(48).map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!(dropped <= short.tail_bound * (1.0 + 1e-12));
        assert!(short.tail_bound < 1e-6);
    }
}
