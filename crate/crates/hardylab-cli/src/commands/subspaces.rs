//! Intersection-dimension suite: principal-angle reports for the eigenspace
//! pairs the counting theorems cover, with full cosine lists and the witness
//! and constant correlations.

use hardylab_core::subspace::intersection_suite;
use serde_json::json;

use crate::commands::CmdResult;
use crate::config::Resolved;
use crate::emit::{cpx, Assertion, Emitter, ResultRecord};

pub fn run(cfg: &Resolved, em: &mut Emitter) -> CmdResult {
    let suite = intersection_suite(cfg.a, cfg.b, cfg.order, cfg.k)?;
    let inputs = json!({
        "a": cpx(cfg.a.value()),
        "b": cpx(cfg.b.value()),
        "order": cfg.order,
        "k": cfg.k,
    });

    for p in &suite.pairs {
        em.record(
            ResultRecord::new("subspaces", p.label, inputs.clone())
                .output("cosines", json!(p.report.cosines))
                .output("threshold", json!(p.report.threshold))
                .output("gap", json!(p.report.gap))
                .assert(Assertion::dims(
                    "intersection_dim",
                    p.report.intersection_dim,
                    p.expected_dim,
                ))
                .assert(Assertion::holds("gap_clears_tails", p.report.gap_ok)),
        )?;
    }

    em.record(
        ResultRecord::new("subspaces", "witness_line", inputs.clone())
            .output("witness_correlation", json!(suite.witness_correlation))
            .output(
                "witness_image_correlation",
                json!(suite.witness_image_correlation),
            )
            .assert(Assertion::ge(
                "witness_correlation",
                suite.witness_correlation,
                0.999,
            )),
    )?;

    em.record(
        ResultRecord::new("subspaces", "constant_line", inputs)
            .output("constant_correlation", json!(suite.constant_correlation))
            .assert(Assertion::ge(
                "constant_correlation",
                suite.constant_correlation,
                0.999,
            )),
    )?;

    Ok(())
}
