//! Geodesic suite: existence conditions for the corollary pairs, the
//! direct-rotation exponent where a unique minimal geodesic exists, and
//! principal-angle checkpoints along the path.

use hardylab_core::linalg::opnorm;
use hardylab_core::subspace::{
    direct_rotation, eigenbasis, geodesic_condition, principal_angles, rotate_by, Parity,
    SubspaceBasis,
};
use hardylab_core::DiskPoint;
use serde_json::json;

use crate::commands::CmdResult;
use crate::config::Resolved;
use crate::emit::{cpx, Assertion, Emitter, ResultRecord};

const CHECKPOINTS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn max_angle(b1: &SubspaceBasis, b2: &SubspaceBasis) -> Result<f64, hardylab_core::CoreError> {
    let cos = principal_angles(b1, b2)?.cosines;
    Ok(cos.iter().map(|s| s.clamp(0.0, 1.0).acos()).fold(0.0, f64::max))
}

pub fn run(cfg: &Resolved, em: &mut Emitter) -> CmdResult {
    let origin = DiskPoint::origin();
    let ev = eigenbasis(origin, Parity::Even, cfg.order, cfg.k)?;
    let od = eigenbasis(origin, Parity::Odd, cfg.order, cfg.k)?;
    let nm = eigenbasis(cfg.a, Parity::Even, cfg.order, cfg.k)?;
    let np = eigenbasis(cfg.a, Parity::Odd, cfg.order, cfg.k)?;
    let inputs = json!({
        "a": cpx(cfg.a.value()),
        "order": cfg.order,
        "k": cfg.k,
    });

    let existence = [
        ("even_to_minus", &ev, &nm),
        ("odd_to_plus", &od, &np),
        ("even_to_plus", &ev, &np),
    ];
    for (label, b1, b2) in existence {
        let cond = geodesic_condition(b1, b2)?;
        let mut record = ResultRecord::new("geodesic", label, inputs.clone())
            .output(
                "condition_dims",
                json!([cond.dim_in_complement, cond.dim_complement_in]),
            )
            .assert(Assertion::holds("condition_unique", cond.unique));
        if !cond.unique {
            em.record(record)?;
            continue;
        }

        let geo = direct_rotation(b1, b2)?;
        let skew = opnorm(&(geo.z.adjoint() + &geo.z));
        let mut path = Vec::with_capacity(CHECKPOINTS.len());
        let mut midpoint_gap = f64::NAN;
        for t in CHECKPOINTS {
            let bt = rotate_by(&geo.z, b1, t)?;
            let to_start = max_angle(&bt, b1)?;
            let to_target = max_angle(&bt, b2)?;
            if t == 0.5 {
                let cs = principal_angles(&bt, b1)?.cosines;
                let ct = principal_angles(&bt, b2)?.cosines;
                midpoint_gap = cs
                    .iter()
                    .zip(ct.iter())
                    .map(|(p, q)| (p.clamp(0.0, 1.0).acos() - q.clamp(0.0, 1.0).acos()).abs())
                    .fold(0.0, f64::max);
            }
            path.push(json!({
                "t": t,
                "max_angle_to_start": to_start,
                "max_angle_to_target": to_target,
            }));
        }

        record = record
            .output("norm", json!(geo.norm))
            .output("residual", json!(geo.residual))
            .output(
                "codiagonal_defects",
                json!([geo.codiagonal_defects.0, geo.codiagonal_defects.1]),
            )
            .output("path", json!(path))
            .assert(Assertion::le("skew_defect", skew, 1e-10))
            .assert(Assertion::le(
                "norm_within_quarter_turn",
                geo.norm,
                std::f64::consts::FRAC_PI_2 + 1e-9,
            ))
            .assert(Assertion::le(
                "residual",
                geo.residual,
                cfg.tol("geodesic_residual"),
            ))
            .assert(Assertion::le(
                "codiagonal",
                geo.codiagonal_defects.0.max(geo.codiagonal_defects.1),
                cfg.tol("codiagonal"),
            ))
            .assert(Assertion::le("midpoint_symmetry", midpoint_gap, cfg.tol("midpoint")));
        em.record(record)?;
    }

    let nonexistence = [
        ("odd_vs_minus", &od, &nm),
        ("minus_vs_plus", &nm, &np),
    ];
    for (label, b1, b2) in nonexistence {
        let cond = geodesic_condition(b1, b2)?;
        let flag = format!(
            "condition_failed dims {}≠{}",
            cond.dim_in_complement, cond.dim_complement_in
        );
        em.record(
            ResultRecord::new("geodesic", label, inputs.clone())
                .output(
                    "condition_dims",
                    json!([cond.dim_in_complement, cond.dim_complement_in]),
                )
                .output("flag", json!(flag))
                .assert(Assertion::holds("condition_failed", !cond.exists)),
        )?;
    }

    Ok(())
}
