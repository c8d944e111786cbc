//! Disk automorphisms z ↦ (a−z)/(1−āz) and the point maps derived from them:
//! the interior fixed point, the sandwich product, the iterated-composition
//! sequence, and its inverse step map. Everything here is exact point
//! arithmetic; no truncation is involved.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Margin below 1 at which points are rejected as effectively on the circle.
pub const DISK_EDGE_MARGIN: f64 = 1e-12;

/// A point strictly inside the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        let m = value.norm();
        if m >= 1.0 - DISK_EDGE_MARGIN {
            return Err(CoreError::OutsideDisk { modulus: m });
        }
        Ok(DiskPoint(value))
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn origin() -> Self {
        DiskPoint(Complex64::new(0.0, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_origin(&self) -> bool {
        self.0.norm() == 0.0
    }
}

impl std::fmt::Display for DiskPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A Möbius map z ↦ (αz+β)/(γz+δ) held projectively: coefficients are
/// normalized to unit Frobenius norm with the first nonzero entry rotated to
/// the positive real axis, so equal maps have equal matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    /// Row-major (α, β, γ, δ).
    pub coeffs: [Complex64; 4],
}

fn normalize(mut c: [Complex64; 4]) -> [Complex64; 4] {
    let f = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in &mut c {
        *x /= f;
    }
    // After unit normalization the leading entry is O(1) whenever it is
    // nonzero at all; 1e-12 separates true zeros from roundoff.
    let lead = c.iter().find(|x| x.norm() > 1e-12);
    if let Some(&l) = lead {
        let phase = l.conj() / l.norm();
        for x in &mut c {
            *x *= phase;
        }
    }
    c
}

impl MoebiusMap {
    pub fn from_coeffs(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let c = normalize([alpha, beta, gamma, delta]);
        let det = (c[0] * c[3] - c[1] * c[2]).norm();
        if det <= 1e-12 {
            return Err(CoreError::SingularInput);
        }
        Ok(MoebiusMap { coeffs: c })
    }

    pub fn identity() -> Self {
        MoebiusMap {
            coeffs: normalize([
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ]),
        }
    }

    /// The self-inverse automorphism exchanging 0 and a, as the matrix (−1, a; −ā, 1).
    pub fn reflection(a: DiskPoint) -> Self {
        let av = a.value();
        MoebiusMap {
            coeffs: normalize([
                Complex64::new(-1.0, 0.0),
                av,
                -av.conj(),
                Complex64::new(1.0, 0.0),
            ]),
        }
    }

    /// The map z ↦ −m(z); negates the numerator row.
    pub fn negated(&self) -> Self {
        MoebiusMap {
            coeffs: normalize([-self.coeffs[0], -self.coeffs[1], self.coeffs[2], self.coeffs[3]]),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let den = self.coeffs[2] * z + self.coeffs[3];
        if den.norm() <= 1e-14 {
            return Err(CoreError::PoleAtPoint { denominator: den.norm() });
        }
        Ok((self.coeffs[0] * z + self.coeffs[1]) / den)
    }

    /// Matrix product; evaluates as self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.coeffs;
        let b = &other.coeffs;
        MoebiusMap {
            coeffs: normalize([
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ]),
        }
    }

    /// Projective distance in the squared-chordal gauge: 1 − |⟨m1, m2⟩_F| on
    /// unit-Frobenius representatives. Zero iff the maps agree up to a scalar;
    /// stays at the 1e−16 noise floor for equal maps, where the square-root
    /// chordal metric would already read ~1e−8.
    pub fn projective_gap(&self, other: &Self) -> f64 {
        let ip: Complex64 = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(x, y)| x * y.conj())
            .sum();
        (1.0 - ip.norm()).max(0.0)
    }

    pub fn equal_projective(&self, other: &Self, tol: f64) -> bool {
        self.projective_gap(other) <= tol
    }
}

/// Interior fixed point of the reflection at a: (1 − √(1−|a|²))/ā, with 0 ↦ 0.
pub fn fixed_point(a: DiskPoint) -> DiskPoint {
    if a.is_origin() {
        return DiskPoint::origin();
    }
    let av = a.value();
    let w = (1.0 - (1.0 - av.norm_sqr()).sqrt()) / av.conj();
    // |w| < |a| < 1 always; construction cannot fail.
    DiskPoint(w)
}

/// Sandwich product: the point c with φ_d ∘ φ_b ∘ φ_d = φ_c,
/// c = (2d − b − b̄d²)/(1 + |d|² − b̄d − bd̄).
pub fn bullet(d: DiskPoint, b: DiskPoint) -> DiskPoint {
    let dv = d.value();
    let bv = b.value();
    let num = 2.0 * dv - bv - bv.conj() * dv * dv;
    let den = 1.0 + dv.norm_sqr() - bv.conj() * dv - bv * dv.conj();
    DiskPoint(num / den)
}

/// n-th point of the alternating-composition sequence: a_n has the phase of a
/// exactly, with modulus (1−s^{n+1})/(1+s^{n+1}) for s = (1−|a|)/(1+|a|).
/// a_0 = a, and (φ_a φ_0)ⁿ φ_a = φ_{a_n} projectively.
pub fn a_seq(a: DiskPoint, n: u32) -> Result<DiskPoint> {
    if a.is_origin() {
        return Err(CoreError::ZeroBase);
    }
    let av = a.value();
    let r = av.norm();
    let s = (1.0 - r) / (1.0 + r);
    let sp = s.powi(n as i32 + 1);
    let modulus = (1.0 - sp) / (1.0 + sp);
    Ok(DiskPoint(av / r * modulus))
}

/// The step map 2a/(1+|a|²); inverts fixed_point, and iterating it n times
/// from a lands on a_seq(a, 2ⁿ−1).
pub fn omega_inverse(a: DiskPoint) -> DiskPoint {
    let av = a.value();
    DiskPoint(2.0 * av / (1.0 + av.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn disk_point_rejects_circle() {
        assert!(DiskPoint::from_re_im(1.0, 0.0).is_err());
        assert!(DiskPoint::from_re_im(0.8, 0.6).is_err());
        assert!(DiskPoint::from_re_im(0.0, 1.0 - 1e-13).is_err());
        assert!(DiskPoint::from_re_im(0.0, 1.0 - 1e-9).is_ok());
    }

    #[test]
    fn reflection_basics() {
        // map at 0 sends z to -z
        let m0 = MoebiusMap::reflection(DiskPoint::origin());
        let z = c(0.3, 0.1);
        assert!((m0.eval(z).unwrap() + z).norm() < 1e-15);

        let a = dp(0.6, 0.0);
        let m = MoebiusMap::reflection(a);
        assert!((m.eval(c(0.0, 0.0)).unwrap() - a.value()).norm() < 1e-15);
        assert!(m.eval(a.value()).unwrap().norm() < 1e-15);
        // boundary sample from the defining formula
        assert!((m.eval(c(1.0, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        let ia = dp(0.0, 0.5);
        assert!((MoebiusMap::reflection(ia).eval(c(0.0, 0.0)).unwrap() - ia.value()).norm() < 1e-15);
    }

    #[test]
    fn eval_pole_detected() {
        let a = dp(0.5, 0.0);
        let m = MoebiusMap::reflection(a);
        // pole of (a-z)/(1-āz) at z = 1/ā = 2
        assert!(matches!(m.eval(c(2.0, 0.0)), Err(CoreError::PoleAtPoint { .. })));
        let id = MoebiusMap::identity();
        assert!((id.eval(c(0.0, 0.2)).unwrap() - c(0.0, 0.2)).norm() < 1e-16);
    }

    #[test]
    fn circle_maps_to_circle() {
        let m = MoebiusMap::reflection(dp(0.3, -0.4));
        for j in 0..64 {
            let t = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            let z = Complex64::from_polar(1.0, t);
            assert!((m.eval(z).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn involution_projective() {
        for a in [dp(0.6, 0.0), dp(0.3, -0.4), DiskPoint::origin()] {
            let m = MoebiusMap::reflection(a);
            assert!(m.compose(&m).equal_projective(&MoebiusMap::identity(), 1e-10));
        }
    }

    #[test]
    fn compose_agrees_with_pointwise() {
        let m1 = MoebiusMap::reflection(dp(0.2, 0.3));
        let m2 = MoebiusMap::reflection(dp(-0.4, 0.1));
        let z = c(0.15, -0.22);
        let lhs = m1.compose(&m2).eval(z).unwrap();
        let rhs = m1.eval(m2.eval(z).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn projective_equality_discriminates() {
        let m = MoebiusMap::reflection(dp(0.6, 0.0));
        let scaled = MoebiusMap::from_coeffs(
            m.coeffs[0] * 5.0,
            m.coeffs[1] * 5.0,
            m.coeffs[2] * 5.0,
            m.coeffs[3] * 5.0,
        )
        .unwrap();
        assert!(m.equal_projective(&scaled, 1e-14));
        assert!(!m.equal_projective(&MoebiusMap::reflection(dp(0.5, 0.0)), 1e-8));
    }

    #[test]
    fn fixed_point_values() {
        assert!(fixed_point(DiskPoint::origin()).is_origin());
        let w = fixed_point(dp(0.6, 0.0));
        assert!((w.value() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let wi = fixed_point(dp(0.0, 0.6));
        assert!((wi.value() - c(0.0, 1.0 / 3.0)).norm() < 1e-15);
        for a in [dp(0.6, 0.0), dp(0.2, -0.35), dp(0.0, 0.6)] {
            let w = fixed_point(a);
            let m = MoebiusMap::reflection(a);
            assert!((m.eval(w.value()).unwrap() - w.value()).norm() < 1e-12);
            assert!(w.modulus() < a.modulus());
        }
    }

    #[test]
    fn fixed_point_composition_pair() {
        // composing the reflection at omega with the reflection at a negates
        // the first map; evaluating the omega-reflection at a gives -omega
        let a = dp(0.6, 0.0);
        let w = fixed_point(a);
        let mw = MoebiusMap::reflection(w);
        let ma = MoebiusMap::reflection(a);
        assert!(mw.compose(&ma).equal_projective(&mw.negated(), 1e-10));
        assert!((mw.eval(a.value()).unwrap() + w.value()).norm() < 1e-12);
    }

    #[test]
    fn bullet_cases() {
        let b = dp(0.3, -0.2);
        assert!((bullet(b, b).value() - b.value()).norm() < 1e-15);
        assert!((bullet(DiskPoint::origin(), b).value() + b.value()).norm() < 1e-15);

        // matrix oracle: build the three-fold composition and compare
        let d = dp(0.3, 0.0);
        let bb = dp(0.5, 0.0);
        let md = MoebiusMap::reflection(d);
        let sandwich = md.compose(&MoebiusMap::reflection(bb)).compose(&md);
        let direct = MoebiusMap::reflection(bullet(d, bb));
        assert!(sandwich.equal_projective(&direct, 1e-12));
    }

    #[test]
    fn a_seq_values_and_law() {
        let a = dp(0.6, 0.0);
        assert!(matches!(a_seq(DiskPoint::origin(), 3), Err(CoreError::ZeroBase)));
        assert!((a_seq(a, 0).unwrap().value() - a.value()).norm() < 1e-15);
        assert!((a_seq(a, 1).unwrap().value() - c(15.0 / 17.0, 0.0)).norm() < 1e-15);

        let ma = MoebiusMap::reflection(a);
        let m0 = MoebiusMap::reflection(DiskPoint::origin());
        let step = ma.compose(&m0);
        let mut acc = ma;
        for n in 1..=12u32 {
            acc = step.compose(&acc);
            let an = MoebiusMap::reflection(a_seq(a, n).unwrap());
            assert!(acc.equal_projective(&an, 1e-10), "n = {n}");
        }
    }

    #[test]
    fn a_seq_monotone_phase_exact() {
        let a = dp(0.3, 0.4);
        let phase = a.value() / a.modulus();
        let mut prev = 0.0;
        for n in 0..12u32 {
            let an = a_seq(a, n).unwrap();
            let m = an.modulus();
            assert!(m > prev && m < 1.0);
            assert!((an.value() / m - phase).norm() < 1e-15);
            prev = m;
        }
    }

    #[test]
    fn omega_inverse_round_trips() {
        assert!(omega_inverse(DiskPoint::origin()).is_origin());
        let b = omega_inverse(dp(1.0 / 3.0, 0.0));
        assert!((b.value() - c(0.6, 0.0)).norm() < 1e-15);
        for a in [dp(0.2, 0.0), dp(0.1, -0.3), dp(0.0, 0.45)] {
            let back = fixed_point(omega_inverse(a));
            assert!((back.value() - a.value()).norm() < 1e-12);
            let step = omega_inverse(a);
            assert!((step.value() - a_seq(a, 1).unwrap().value()).norm() < 1e-13);
        }
    }

    #[test]
    fn omega_inverse_doubling() {
        // n applications of the step map jump to sequence index 2^n - 1
        let a = dp(0.2, 0.0);
        let mut cur = a;
        for n in 1..=4u32 {
            cur = omega_inverse(cur);
            let target = a_seq(a, (1u32 << n) - 1).unwrap();
            assert!((cur.value() - target.value()).norm() < 1e-12, "n = {n}");
        }
    }
}
