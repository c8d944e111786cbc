//! Cross-module identity suite: Möbius point laws on seeded samples, operator
//! identities at the configured point and order, and the polar-symmetry
//! checks. One record per assertion; truncation-driven failures carry the
//! relevant tail bound in their outputs.

use hardylab_core::compose::{
    adjoint_cowen, c_matrix, column_tails, gram_cstarc, reflection_defect_bound, w_matrix,
};
use hardylab_core::hardy::{moebius_power, phi_series, szego_kernel};
use hardylab_core::linalg::{hermitian_defect, identity, opnorm};
use hardylab_core::moebius::{a_seq, bullet, fixed_point, omega_inverse, MoebiusMap};
use hardylab_core::polar::{
    modulus_matrix, range_symmetry, null_symmetry, rho_matrix, series_inv_modulus,
    symmetry_route_gap,
};
use hardylab_core::toeplitz::{mult_matrix, shift_matrix};
use hardylab_core::DiskPoint;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::{leading, sample_points, CmdResult};
use crate::config::Resolved;
use crate::emit::{cpx, Assertion, Emitter, ResultRecord};

pub fn run(cfg: &Resolved, em: &mut Emitter) -> CmdResult {
    let inputs = json!({
        "a": cpx(cfg.a.value()),
        "order": cfg.order,
        "seed": cfg.seed,
    });
    let rec = |name: &str| ResultRecord::new("verify", name, inputs.clone());

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pts = sample_points(&mut rng, 40, 0.8);
    let args: Vec<Complex64> = (0..30)
        .map(|_| {
            let r: f64 = rng.gen_range(0.0..0.97f64);
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, t)
        })
        .collect();

    let tol_point = cfg.tol("moebius_pointwise");
    let tol_proj = cfg.tol("moebius_projective");

    let mut involution = 0.0f64;
    let mut fixed = 0.0f64;
    for &p in &pts {
        let map = MoebiusMap::reflection(p);
        for &z in &args {
            involution = involution.max((map.eval(map.eval(z)?)? - z).norm());
        }
        let w = fixed_point(p).value();
        fixed = fixed.max((map.eval(w)? - w).norm());
    }
    em.record(
        rec("moebius_involution")
            .output("samples", json!(pts.len() * args.len()))
            .assert(Assertion::le("pointwise", involution, tol_point)),
    )?;
    em.record(rec("moebius_fixed_point").assert(Assertion::le("pointwise", fixed, tol_point)))?;

    let origin_map = MoebiusMap::reflection(DiskPoint::origin());
    let mut half_law = 0.0f64;
    let mut bullet_law = 0.0f64;
    for pair in pts.chunks_exact(2) {
        let (d, b) = (pair[0], pair[1]);
        let w = fixed_point(d);
        let via_fix = MoebiusMap::reflection(w)
            .compose(&origin_map.compose(&MoebiusMap::reflection(w)));
        half_law = half_law.max(via_fix.projective_gap(&MoebiusMap::reflection(d)));
        let conj = MoebiusMap::reflection(d)
            .compose(&MoebiusMap::reflection(b).compose(&MoebiusMap::reflection(d)));
        bullet_law = bullet_law.max(conj.projective_gap(&MoebiusMap::reflection(bullet(d, b))));
    }
    em.record(rec("moebius_half_law").assert(Assertion::le("projective", half_law, tol_proj)))?;
    em.record(rec("moebius_bullet_law").assert(Assertion::le("projective", bullet_law, tol_proj)))?;

    let mut seq_law = 0.0f64;
    let mut iter_law = 0.0f64;
    for &p in pts.iter().take(10) {
        let refl = MoebiusMap::reflection(p);
        let mut chain = refl.clone();
        for n in 0..=12u32 {
            seq_law = seq_law.max(chain.projective_gap(&MoebiusMap::reflection(a_seq(p, n)?)));
            chain = refl.compose(&origin_map.compose(&chain));
        }
        let mut s = p;
        for n in 1..=4u32 {
            s = omega_inverse(s);
            let target = a_seq(p, 2u32.pow(n) - 1)?;
            iter_law = iter_law.max((s.value() - target.value()).norm());
        }
    }
    em.record(rec("moebius_a_seq_law").assert(Assertion::le("projective", seq_law, tol_proj)))?;
    em.record(
        rec("moebius_omega_iteration").assert(Assertion::le("pointwise", iter_law, tol_point)),
    )?;

    let a = cfg.a;
    let n = cfg.order;
    let half = n / 2;
    let deg = n / 4;
    let c = c_matrix(a, n);
    let tails = column_tails(&c);
    let tail_low = tails[..=deg].iter().copied().fold(0.0f64, f64::max);
    let defect_bound = reflection_defect_bound(a, tail_low);

    let mut c2 = 0.0f64;
    for _ in 0..4 {
        let mut v = DVector::zeros(n);
        for j in 0..=deg {
            v[j] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let v = v.unscale(v.norm());
        c2 = c2.max((&c * (&c * &v) - &v).norm());
    }
    em.record(
        rec("composition_involution")
            .output("degree", json!(deg))
            .output("tail_bound", json!(defect_bound))
            .assert(Assertion::le("residual", c2, cfg.tol("c_squared"))),
    )?;

    let adj = opnorm(&leading(&(adjoint_cowen(a, n) - c.adjoint()), half));
    em.record(
        rec("adjoint_routes")
            .output("block", json!(half))
            .output("tail_bound", json!(tail_low))
            .assert(Assertion::le("block_gap", adj, cfg.tol("adjoint_block"))),
    )?;

    let ka = szego_kernel(n, a);
    let one = {
        let mut e = DVector::zeros(n);
        e[0] = Complex64::new(1.0, 0.0);
        e
    };
    let r = a.modulus();
    let ka_tail = (r.powi(2 * n as i32) / (1.0 - r * r)).sqrt();
    let to_one = (&c * (c.adjoint() * &ka.coeffs) - &one).norm();
    let to_ka = (c.adjoint() * (&c * &one) - &ka.coeffs).norm();
    em.record(
        rec("kernel_identities")
            .output("tail_bound", json!(ka_tail))
            .assert(Assertion::le(
                "kernel_roundtrip",
                to_one.max(to_ka),
                cfg.tol("kernel_identity") + ka_tail,
            )),
    )?;

    let w = w_matrix(a, n);
    // W has unit columns in the untruncated operator, so the truncated
    // column norms measure the dropped mass directly.
    let w_tail = column_tails(&w)[..half].iter().copied().fold(0.0f64, f64::max);
    let w2 = opnorm(&leading(&(&w * &w - identity(n)), half));
    em.record(
        rec("weighted_involution")
            .output("block", json!(half))
            .output("tail_bound", json!(w_tail))
            .assert(Assertion::le("residual", w2, cfg.tol("w_squared"))),
    )?;

    let shifted = &w * shift_matrix(n) * &w;
    let wsw = opnorm(&leading(&(shifted - mult_matrix(&phi_series(n, a))), half));
    em.record(
        rec("weighted_shift_transport")
            .output("block", json!(half))
            .output("tail_bound", json!(w_tail))
            .assert(Assertion::le("residual", wsw, cfg.tol("w_shift_toeplitz"))),
    )?;

    let gram_gap = opnorm(&leading(&(c.adjoint() * &c - gram_cstarc(a, n)), half));
    em.record(
        rec("gram_toeplitz_route")
            .output("block", json!(half))
            .output("tail_bound", json!(tail_low))
            .assert(Assertion::le("block_gap", gram_gap, cfg.tol("toeplitz_block"))),
    )?;

    let rho = rho_matrix(a, n)?;
    let herm = hermitian_defect(&leading(&rho, half));
    let unit = opnorm(&leading(&(&rho * rho.adjoint() - identity(n)), half));
    em.record(rec("polar_hermitian").assert(Assertion::le(
        "defect",
        herm,
        cfg.tol("rho_hermitian"),
    )))?;
    em.record(rec("polar_unitary").assert(Assertion::le(
        "defect",
        unit,
        cfg.tol("rho_unitary"),
    )))?;

    let modulus = modulus_matrix(a, n)?;
    let recon = opnorm(&leading(&(&c - &rho * &modulus), half));
    em.record(rec("polar_reconstruction").assert(Assertion::le(
        "residual",
        recon,
        cfg.tol("reconstruction"),
    )))?;

    let (gap_range, gap_null) = symmetry_route_gap(a, n)?;
    em.record(
        rec("symmetry_routes")
            .output("range_gap", json!(gap_range))
            .output("null_gap", json!(gap_null))
            .assert(Assertion::le(
                "route_gap",
                gap_range.max(gap_null),
                cfg.tol("symmetry_routes"),
            )),
    )?;

    let omega = fixed_point(a);
    let k_fix = (n / 8).min(8).max(1);
    let r_sym = range_symmetry(a, n)?;
    let n_sym = null_symmetry(a, n)?;
    let mut fix_res = 0.0f64;
    for m in 0..k_fix as u32 {
        let even = moebius_power(n, omega, 2 * m);
        let odd = moebius_power(n, omega, 2 * m + 1);
        fix_res = fix_res.max((&r_sym * &even.coeffs - &even.coeffs).norm());
        fix_res = fix_res.max((&n_sym * &odd.coeffs - &odd.coeffs).norm());
    }
    em.record(
        rec("symmetry_eigenvectors")
            .output("columns", json!(k_fix))
            .assert(Assertion::le("residual", fix_res, cfg.tol("symmetry_fix"))),
    )?;

    let (_, series_res) = series_inv_modulus(a, n, 40)?;
    em.record(
        rec("modulus_series")
            .output("terms", json!(40))
            .assert(Assertion::le("residual", series_res, cfg.tol("series_residual"))),
    )?;

    Ok(())
}
