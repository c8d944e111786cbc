//! Matrices of the composition reflection C_a, its weighted companion W_a,
//! the closed-form products C_a*C_a and C_aC_a*, and the distance
//! diagnostics between two such operators.
//!
//! Everything lives on the degree-cut space, so each matrix is the top-left
//! compression of the true operator. Identities are checked on low-degree
//! columns or leading blocks, with the dropped mass tracked explicitly:
//! column j of C_a is the truncation of the unit-norm power φ_a^j, so
//! √(1−‖col_j‖²) is the exact tail and every derived bound follows from it.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::hardy::{phi_series, szego_kernel, HardyVector};
use crate::linalg::{opnorm, OperatorMatrix};
use crate::moebius::{DiskPoint, MoebiusMap};
use crate::toeplitz::{coshift_matrix, mult_matrix, symbol_ka2, toeplitz_matrix};

/// Matrix of f ↦ f∘φ_a: column k holds the truncated Taylor series of φ_a^k.
pub fn c_matrix(a: DiskPoint, order: usize) -> OperatorMatrix {
    let mut c = OperatorMatrix::zeros(order, order);
    c[(0, 0)] = Complex64::new(1.0, 0.0);
    let p = phi_series(order, a);
    let mut col = HardyVector::monomial(order, 0);
    for k in 1..order {
        col = col.mult(&p).unwrap();
        c.set_column(k, &col.coeffs);
    }
    c
}

/// Weighted reflection W_a = M_{ψ_a}·C_a with ψ_a = √(1−|a|²)·k_a. Unlike
/// C_a it is unitary, which keeps all its truncation bounds weight-free.
pub fn w_matrix(a: DiskPoint, order: usize) -> OperatorMatrix {
    let mut psi = szego_kernel(order, a);
    let s = Complex64::new((1.0 - a.value().norm_sqr()).sqrt(), 0.0);
    psi.coeffs *= s;
    mult_matrix(&psi) * c_matrix(a, order)
}

/// Adjoint of C_a assembled from multiplication, composition and coshift
/// pieces: M_{k_a}C_a − a·M_{k_a}C_a·S*. Validation route only; the working
/// adjoint is the conjugate transpose, which is exact on the cut space.
pub fn adjoint_cowen(a: DiskPoint, order: usize) -> OperatorMatrix {
    let mk = mult_matrix(&szego_kernel(order, a));
    let c = c_matrix(a, order);
    let mc = mk * c;
    &mc - (&mc * coshift_matrix(order)) * a.value()
}

/// Closed form of C_a*C_a: (1−|a|²)·T_{1/|1−āz|²}, entries ā^{j−k} below the
/// diagonal. Exact, not a truncated product.
pub fn gram_cstarc(a: DiskPoint, order: usize) -> OperatorMatrix {
    toeplitz_matrix(&symbol_ka2(a, order), order).scale(1.0 - a.value().norm_sqr())
}

/// Closed form of C_aC_a*: (1−āS)(1−aS*)/(1−|a|²), tridiagonal with the
/// (0,0) corner at 1/(1−|a|²).
pub fn gram_ccstar(a: DiskPoint, order: usize) -> OperatorMatrix {
    let av = a.value();
    let r2 = av.norm_sqr();
    let mut g = OperatorMatrix::zeros(order, order);
    for j in 0..order {
        g[(j, j)] = Complex64::new(if j == 0 { 1.0 } else { 1.0 + r2 }, 0.0);
        if j + 1 < order {
            g[(j + 1, j)] = -av.conj();
            g[(j, j + 1)] = -av;
        }
    }
    g.scale(1.0 / (1.0 - r2))
}

/// Largest singular value of C_a − C_b. A compression norm, hence a certified
/// lower bound for the true operator-norm distance, increasing in the order.
pub fn berkson_gap(a: DiskPoint, b: DiskPoint, order: usize) -> f64 {
    opnorm(&(c_matrix(a, order) - c_matrix(b, order)))
}

/// Sup over a θ-grid of |ā·φ_a − b̄·φ_b| on the circle, together with the
/// bound 4|a−b|/(1−|a|). Checks the bound and the two-sided pinch
/// ||a|−|b|| ≤ sup ≤ |a|+|b| before returning.
pub fn delta_ab(a: DiskPoint, b: DiskPoint, grid: usize) -> Result<(f64, f64)> {
    if grid < 256 {
        return Err(CoreError::AssertionFailure {
            name: "delta_ab grid size".into(),
            value: grid as f64,
            bound: 256.0,
        });
    }
    let ma = MoebiusMap::reflection(a);
    let mb = MoebiusMap::reflection(b);
    let (ab, bb) = (a.value().conj(), b.value().conj());
    let mut sup = 0.0f64;
    for j in 0..grid {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / grid as f64);
        // both maps are pole-free on the circle for interior points
        let d = ab * ma.eval(z)? - bb * mb.eval(z)?;
        sup = sup.max(d.norm());
    }
    let bound = 4.0 * (a.value() - b.value()).norm() / (1.0 - a.modulus());
    let floor = (a.modulus() - b.modulus()).abs();
    let ceil = a.modulus() + b.modulus();
    // grid sampling sits below the true sup, so only the floor needs slack
    if sup > bound || sup > ceil + 1e-12 || sup < floor - 1e-9 {
        return Err(CoreError::AssertionFailure {
            name: "delta_ab envelope".into(),
            value: sup,
            bound,
        });
    }
    Ok((sup, bound))
}

/// Exact per-column truncation tails of c_matrix: column j represents the
/// unit-norm φ_a^j, so the dropped mass is √(1−‖col_j‖²).
pub fn column_tails(c: &OperatorMatrix) -> Vec<f64> {
    (0..c.ncols())
        .map(|j| {
            let kept: f64 = c.column(j).iter().map(|x| x.norm_sqr()).sum();
            (1.0 - kept).max(0.0).sqrt()
        })
        .collect()
}

/// Bound for ‖(C_a²−I)e_j‖ from the column tail: the second application of
/// C_a amplifies the dropped mass by at most ‖C_a‖ = √((1+|a|)/(1−|a|)).
pub fn reflection_defect_bound(a: DiskPoint, tail_j: f64) -> f64 {
    let r = a.modulus();
    ((1.0 + r) / (1.0 - r)).sqrt() * tail_j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::moebius_power;
    use crate::linalg::{frobenius, identity, max_abs};
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::from_re_im(re, im).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit(n: usize, j: usize) -> DVector<Complex64> {
        HardyVector::monomial(n, j).coeffs
    }

    #[test]
    fn c_at_origin_is_parity() {
        let m = c_matrix(DiskPoint::origin(), 6);
        for j in 0..6 {
            for k in 0..6 {
                let want = if j == k {
                    c(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    c(0.0, 0.0)
                };
                assert_eq!(m[(j, k)], want);
            }
        }
    }

    #[test]
    fn c_columns_are_moebius_powers() {
        let a = dp(0.4, -0.25);
        let n = 64;
        let m = c_matrix(a, n);
        for k in [0usize, 1, 2, 7, 30] {
            let p = moebius_power(n, a, k as u32);
            assert!((DVector::from(m.column(k)) - p.coeffs).norm() < 1e-13);
        }
    }

    #[test]
    fn c_squares_to_identity_on_low_degrees() {
        // the tail bound is rigorous for every a; the absolute 1e-8 reading
        // additionally needs the Taylor mass of φ^j to die out below the cut,
        // which caps |a| well below 0.6 at j = N/4 (φ^j spreads to degree
        // j(1+|a|)/(1−|a|))
        let n = 128;
        for a in [dp(0.3, 0.0), dp(0.6, 0.0), dp(0.2, 0.3)] {
            let m = c_matrix(a, n);
            let m2 = &m * &m;
            let tails = column_tails(&m);
            let floor = crate::hardy::tail_noise_floor(n);
            for j in 0..=n / 4 {
                let err = (DVector::from(m2.column(j)) - unit(n, j)).norm();
                let bound = reflection_defect_bound(a, tails[j] + floor);
                assert!(err <= bound, "a={a:?} j={j} err={err} bound={bound}");
            }
        }
        for a in [dp(0.3, 0.0), dp(0.2, 0.3)] {
            let m = c_matrix(a, n);
            let m2 = &m * &m;
            for j in 0..=n / 4 {
                let err = (DVector::from(m2.column(j)) - unit(n, j)).norm();
                assert!(err <= 1e-8, "a={a:?} j={j} err={err}");
            }
        }
    }

    #[test]
    fn kernel_decomposition_of_c_applied_to_szego() {
        // C_a k_u = (ū(1−|a|²)/((ū−ā)(1−ūa)))·k_{φ_a(u)} + (ā/(ā−ū))·k_0,
        // the exact partial-fraction split of 1/(1−ū·φ_a(z))
        let n = 256;
        for (a, u) in [
            (dp(0.6, 0.0), dp(0.2, 0.0)),
            (dp(0.5, 0.0), dp(0.1, 0.3)),
            (dp(0.3, -0.2), dp(-0.25, 0.1)),
        ] {
            let (av, uv) = (a.value(), u.value());
            let (ab, ub) = (av.conj(), uv.conj());
            let m = c_matrix(a, n);
            let lhs = &m * szego_kernel(n, u).coeffs;
            let w = MoebiusMap::reflection(a).eval(uv).unwrap();
            let kw = szego_kernel(n, DiskPoint::new(w).unwrap());
            let c1 = ub * (1.0 - av.norm_sqr()) / ((ub - ab) * (1.0 - ub * av));
            let c2 = ab / (ab - ub);
            let rhs = kw.coeffs * c1 + szego_kernel(n, DiskPoint::origin()).coeffs * c2;
            // truncation error: C_a k_u column combination vs exact kernels
            assert!((lhs - rhs).norm() < 1e-12, "a={a:?} u={u:?}");
        }
    }

    #[test]
    fn w_at_origin_is_parity() {
        assert!(frobenius(&(w_matrix(DiskPoint::origin(), 8) - c_matrix(DiskPoint::origin(), 8))) == 0.0);
    }

    #[test]
    fn w_squares_to_identity_with_tight_tails() {
        let n = 128;
        for a in [dp(0.5, 0.0), dp(0.35, 0.35)] {
            let w = w_matrix(a, n);
            let w2 = &w * &w;
            // two truncations feed the defect on e_j: the φ-power's dropped
            // mass (amplified by ‖ψ‖_∞ = √((1+|a|)/(1−|a|)) when multiplied
            // in) and the W column's own dropped mass; both columns are
            // truncations of unit-norm functions, so both tails are measured
            let amp = ((1.0 + a.modulus()) / (1.0 - a.modulus())).sqrt();
            let tails_c = column_tails(&c_matrix(a, n));
            let tails_w = column_tails(&w);
            let floor = crate::hardy::tail_noise_floor(n);
            for j in 0..=n / 4 {
                let err = (DVector::from(w2.column(j)) - unit(n, j)).norm();
                let bound = 2.0 * amp * (tails_c[j] + tails_w[j] + floor);
                assert!(err <= bound, "a={a:?} j={j} err={err} bound={bound}");
            }
        }
        for a in [dp(0.3, 0.0), dp(0.25, 0.25)] {
            let w = w_matrix(a, n);
            let w2 = &w * &w;
            for j in 0..=n / 4 {
                let err = (DVector::from(w2.column(j)) - unit(n, j)).norm();
                assert!(err <= 1e-8, "a={a:?} j={j} err={err}");
            }
        }
    }

    #[test]
    fn w_conjugates_shift_to_phi_multiplication() {
        // half-block agreement needs column j=N/2's mass to fit under the
        // cut: j(1+|a|)/(1−|a|) < N forces |a| < 1/3 here
        let a = dp(0.25, 0.0);
        let n = 256;
        let w = w_matrix(a, n);
        let t_phi = mult_matrix(&phi_series(n, a));
        let lhs = (&w * crate::toeplitz::shift_matrix(n)) * &w;
        let h = n / 2;
        let diff = lhs.view((0, 0), (h, h)) - t_phi.view((0, 0), (h, h));
        assert!(opnorm(&diff.into()) < 1e-8);

        // per-column agreement reaches larger |a| on lower degrees
        let a = dp(0.4, 0.1);
        let w = w_matrix(a, n);
        let t_phi = mult_matrix(&phi_series(n, a));
        let lhs = (&w * crate::toeplitz::shift_matrix(n)) * &w;
        for j in 0..=n / 4 {
            let err = (DVector::from(lhs.column(j)) - DVector::from(t_phi.column(j))).norm();
            assert!(err < 1e-8, "j={j} err={err}");
        }
    }

    #[test]
    fn cowen_adjoint_matches_transpose() {
        let n = 256;
        for a in [dp(0.4, 0.0), dp(0.3, 0.2)] {
            let ac = adjoint_cowen(a, n);
            let ch = c_matrix(a, n).adjoint();
            let h = 64;
            let diff = ac.view((0, 0), (h, h)) - ch.view((0, 0), (h, h));
            assert!(opnorm(&diff.into()) < 1e-8);
        }
        assert!(frobenius(&(adjoint_cowen(DiskPoint::origin(), 8) - c_matrix(DiskPoint::origin(), 8))) < 1e-15);
    }

    #[test]
    fn adjoint_applied_to_constant_gives_kernel() {
        let a = dp(0.5, 0.0);
        let n = 256;
        let m = c_matrix(a, n);
        let lhs = m.adjoint() * (&m * unit(n, 0));
        let k = szego_kernel(n, a);
        assert!((lhs - k.coeffs).norm() < 1e-12);
    }

    #[test]
    fn gram_cstarc_matches_dense_product_low_a() {
        // closed form vs dense compression: agreement needs the columns'
        // Taylor mass to fit below the cut, hence the small-|a| choice
        let n = 256;
        let a = dp(0.2, 0.1);
        let g = gram_cstarc(a, n);
        let m = c_matrix(a, n);
        let dense = m.adjoint() * &m;
        let h = n / 2;
        let diff = g.view((0, 0), (h, h)) - dense.view((0, 0), (h, h));
        assert!(opnorm(&diff.into()) < 1e-7);
    }

    #[test]
    fn gram_cstarc_spectrum_within_symbol_range() {
        let a = dp(0.6, 0.0);
        let g = gram_cstarc(a, 128);
        let (vals, _) = crate::linalg::hermitian_eigen(&g, 1e-10).unwrap();
        for &v in vals.iter() {
            assert!(v >= 0.25 - 1e-9 && v <= 4.0 + 1e-9);
        }
        assert!(frobenius(&(gram_cstarc(DiskPoint::origin(), 8) - identity(8))) == 0.0);
    }

    #[test]
    fn gram_ccstar_closed_form_properties() {
        let n = 256;
        let a = dp(0.6, 0.0);
        let g = gram_ccstar(a, n);
        assert!(crate::linalg::hermitian_defect(&g) == 0.0);

        // G·k_a = 1 up to kernel tail
        let k = szego_kernel(n, a);
        let out = &g * &k.coeffs;
        assert!((out - unit(n, 0)).norm() < 1e-12 + 3.0 * k.tail_bound);

        assert!(frobenius(&(gram_ccstar(DiskPoint::origin(), 8) - identity(8))) == 0.0);

        // dense-product cross-check: the matrix product sums only the stored
        // columns, whose high-degree mass reaches down to degree
        // m(1−|a|)/(1+|a|), so the half block is clean only for |a| < 1/3
        let b = dp(0.25, 0.0);
        let gb = gram_ccstar(b, n);
        let m = c_matrix(b, n);
        let dense = &m * m.adjoint();
        let h = n / 2;
        let diff = gb.view((0, 0), (h, h)) - dense.view((0, 0), (h, h));
        assert!(opnorm(&diff.into()) < 1e-7);
    }

    #[test]
    fn gram_ccstar_equals_bidiagonal_product() {
        let a = dp(0.3, -0.45);
        let n = 32;
        let f = crate::toeplitz::mult_one_minus_abar_z(a, n);
        let prod = (&f * f.adjoint()).scale(1.0 / (1.0 - a.value().norm_sqr()));
        assert!(max_abs(&(prod - gram_ccstar(a, n))) < 1e-14);
    }

    #[test]
    fn berkson_gap_behaviour() {
        let a = dp(0.3, 0.0);
        let b = dp(-0.4, 0.0);
        assert_eq!(berkson_gap(a, a, 64), 0.0);
        let g64 = berkson_gap(a, b, 64);
        let g256 = berkson_gap(a, b, 256);
        assert!(g64 <= g256 + 1e-12);
        assert!(g256 >= 1.0 / 2.0_f64.sqrt());
    }

    #[test]
    fn delta_ab_examples() {
        let a = dp(0.3, 0.0);
        let (sup, bound) = delta_ab(a, a, 512).unwrap();
        assert_eq!((sup, bound), (0.0, 0.0));

        let (sup, bound) = delta_ab(a, DiskPoint::origin(), 512).unwrap();
        assert!((sup - 0.3).abs() < 1e-9);
        assert!((bound - 4.0 * 0.3 / 0.7).abs() < 1e-14);

        let (sup, bound) = delta_ab(dp(0.5, 0.0), dp(0.4, 0.0), 512).unwrap();
        assert!(sup <= 0.8);
        assert!((bound - 0.8).abs() < 1e-14);

        assert!(matches!(
            delta_ab(a, DiskPoint::origin(), 100),
            Err(CoreError::AssertionFailure { .. })
        ));
    }

    #[test]
    fn delta_identity_two_forms() {
        // ā·φ_a − b̄·φ_b = (1−|b|²)/(1−b̄z) − (1−|a|²)/(1−āz) on the circle
        let a = dp(0.35, 0.1);
        let b = dp(-0.2, 0.25);
        let (av, bv) = (a.value(), b.value());
        let ma = MoebiusMap::reflection(a);
        let mb = MoebiusMap::reflection(b);
        let one = c(1.0, 0.0);
        for j in 0..512 {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 512.0);
            let lhs = av.conj() * ma.eval(z).unwrap() - bv.conj() * mb.eval(z).unwrap();
            let rhs = (one - bv.norm_sqr() * one) / (one - bv.conj() * z)
                - (one - av.norm_sqr() * one) / (one - av.conj() * z);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn intertwining_has_exact_rank_one_defect() {
        // (C*C)W − W(CC*) = (|a|²/(1−|a|²))·W·P₀ on the cut space
        let n = 128;
        for a in [dp(0.3, 0.0), dp(0.6, 0.0), dp(0.2, -0.3)] {
            let r2 = a.value().norm_sqr();
            let w = w_matrix(a, n);
            let lhs = gram_cstarc(a, n) * &w - &w * gram_ccstar(a, n);
            let mut p0 = OperatorMatrix::zeros(n, n);
            p0[(0, 0)] = c(1.0, 0.0);
            let pred = (&w * p0).scale(r2 / (1.0 - r2));
            let h = n / 2;
            let diff = lhs.view((0, 0), (h, h)) - pred.view((0, 0), (h, h));
            assert!(opnorm(&diff.into()) < 1e-12, "a={a:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reflection_defect_within_bound(re in -0.42f64..0.42, im in -0.42f64..0.42, j in 0usize..24) {
            prop_assume!((re * re + im * im).sqrt() <= 0.6);
            let a = dp(re, im);
            let n = 96;
            let m = c_matrix(a, n);
            let tails = column_tails(&m);
            let floor = crate::hardy::tail_noise_floor(n);
            let err = ((&m * &m) * unit(n, j) - unit(n, j)).norm();
            prop_assert!(err <= reflection_defect_bound(a, tails[j] + floor));
        }

        #[test]
        fn delta_envelope_holds(ra in 0.0f64..0.6, ta in 0.0f64..6.28, rb in 0.0f64..0.6, tb in 0.0f64..6.28) {
            let a = DiskPoint::new(Complex64::from_polar(ra, ta)).unwrap();
            let b = DiskPoint::new(Complex64::from_polar(rb, tb)).unwrap();
            let (sup, bound) = delta_ab(a, b, 512).unwrap();
            prop_assert!(sup <= bound + 1e-12);
        }
    }
}
