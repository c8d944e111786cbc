//! Spectral-measure cross-checks against the Szegő kernel and matrix
//! functional calculus, plus a density grid dump for plotting.

use hardylab_core::hardy::{szego_kernel, HardyVector};
use hardylab_core::polar::herm_sqrt;
use hardylab_core::spectral::{phi_closed, profile, spectral_form};
use hardylab_core::toeplitz::{symbol_ka2, toeplitz_matrix};
use hardylab_core::DiskPoint;
use num_complex::Complex64;
use serde_json::json;

use crate::commands::CmdResult;
use crate::config::Resolved;
use crate::emit::{cpx, Assertion, Emitter, ResultRecord};

pub fn run(cfg: &Resolved, em: &mut Emitter) -> CmdResult {
    let prof = profile(cfg.a)?;
    let inputs = json!({
        "a": cpx(cfg.a.value()),
        "order": cfg.order,
        "theta_points": cfg.budget.theta_points,
        "lambda_points": cfg.budget.lambda_points,
    });
    let rec = |name: &str| ResultRecord::new("spectral", name, inputs.clone());

    let pairs = [
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.2, 0.0), Complex64::new(0.3, 0.0)),
    ];

    let mut mass_rec = rec("mass_identity");
    for (u, v) in pairs {
        let got = spectral_form(|_| 1.0, u, v, &prof, &cfg.budget)?;
        let want = 1.0 / (1.0 - u.conj() * v);
        mass_rec = mass_rec.assert(Assertion::le(
            format!("mass({},{})", u.re, v.re),
            (got - want).norm(),
            cfg.tol("mass"),
        ));
    }
    em.record(mass_rec)?;

    let t = toeplitz_matrix(&symbol_ka2(cfg.a, cfg.order), cfg.order);
    let mut moment_rec = rec("first_moment");
    for (u, v) in pairs {
        let ku = szego_kernel(cfg.order, DiskPoint::new(u)?);
        let kv = szego_kernel(cfg.order, DiskPoint::new(v)?);
        let image = HardyVector::from_coeffs((&t * &ku.coeffs).iter().copied().collect());
        let want = image.inner(&kv)?;
        let got = spectral_form(|l| l, u, v, &prof, &cfg.budget)?;
        moment_rec = moment_rec.assert(Assertion::le(
            format!("moment({},{})", u.re, v.re),
            (got - want).norm(),
            cfg.tol("moment"),
        ));
    }
    em.record(moment_rec)?;

    let origin = Complex64::new(0.0, 0.0);
    let sqrt_got = spectral_form(f64::sqrt, origin, origin, &prof, &cfg.budget)?;
    let sqrt_want = herm_sqrt(&t)?[(0, 0)];
    em.record(rec("sqrt_moment").assert(Assertion::le(
        "sqrt_moment(0,0)",
        (sqrt_got - sqrt_want).norm(),
        cfg.tol("sqrt_moment"),
    )))?;

    let rows = cfg.budget.lambda_points.max(2);
    let (lo, hi) = (prof.lambda_min, prof.lambda_max);
    em.grid_header("spectral", "lambda", &["lambda", "density", "phi0_sq"])?;
    let mut first_density = f64::NAN;
    let mut last_density = f64::NAN;
    for i in 0..rows {
        let lambda = lo + (hi - lo) * i as f64 / (rows - 1) as f64;
        let density = prof.density(lambda);
        let phi0 = phi_closed(origin, lambda, &prof).norm_sqr();
        if i == 0 {
            first_density = density;
        }
        if i == rows - 1 {
            last_density = density;
        }
        em.grid_row("lambda", &[lambda, density, phi0])?;
    }
    // The density is sin(arccos c)/π with c = ±1 at the support edges, so a
    // one-ulp rounding of 1/λ already yields √(2ε)/π ≈ 6.7e-9; the edge bound
    // must absorb that amplification.
    const EDGE_DENSITY: f64 = 1e-7;
    em.record(
        rec("support_grid")
            .output("lambda_min", json!(lo))
            .output("lambda_max", json!(hi))
            .output("rows", json!(rows))
            .assert(Assertion::le("density_at_lambda_min", first_density, EDGE_DENSITY))
            .assert(Assertion::le("density_at_lambda_max", last_density, EDGE_DENSITY)),
    )?;

    Ok(())
}
