//! JSON-lines rendering of verification reports.

use f4trace_core::verify::{PropertyKind, Report, Verdict};
use serde_json::{json, Map, Value};

pub fn report_json(r: &Report) -> Value {
    let mut stats = Map::new();
    for (k, v) in &r.stats {
        stats.insert(k.clone(), Value::String(v.clone()));
    }
    let inst = &r.instance;
    let mut v = json!({
        "property": r.property.tag(),
        "n": inst.n,
        "delta": inst.delta,
        "p": inst.p,
        "seed": inst.seed,
        "stats": stats,
    });
    match &r.verdict {
        Verdict::Pass => v["verdict"] = json!("pass"),
        Verdict::Fail { witness, genericity_candidate } => {
            v["verdict"] = json!("fail");
            v["witness"] = json!(witness);
            if *genericity_candidate {
                v["note"] = json!("genericity violation candidate");
            }
        }
    }
    v
}

/// A line for a check whose prerequisite does not hold on the instance.
pub fn precondition_json(kind: PropertyKind, n: usize, delta: u32, p: u32, seed: Option<u64>, unmet: &str) -> Value {
    json!({
        "property": kind.tag(),
        "n": n,
        "delta": delta,
        "p": p,
        "seed": seed,
        "verdict": "precondition_unmet",
        "unmet": unmet,
    })
}
