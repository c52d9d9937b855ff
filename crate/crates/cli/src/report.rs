//! JSON reports. Keys are sorted (serde_json's default map), indices are
//! 1-based, exact numbers print as `"p/q"` and floats with 17 significant
//! digits, both as strings.

use coapprox_core::linalg::rational::RationalText;
use coapprox_core::linalg::{Interval, Rational};
use coapprox_core::oracle::{FailingWitness, VerificationReport};
use coapprox_core::solver::ConstraintSystem;
use coapprox_core::{Classification, ComponentTable, Scalar, SolutionKind, SolutionSet, StarReport};
use serde_json::{json, Map, Value};

pub fn rational(r: &Rational) -> Value {
    Value::String(RationalText(r).to_string())
}

pub fn float(x: f64) -> Value {
    Value::String(Scalar::Float(x).to_string())
}

fn scalar(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

fn interval(iv: &Interval<Scalar>) -> Value {
    json!({ "lo": scalar(&iv.lo), "hi": scalar(&iv.hi) })
}

fn one_based(v: &[usize]) -> Value {
    Value::Array(v.iter().map(|i| json!(i + 1)).collect())
}

pub fn classification(c: &Classification) -> Value {
    json!({
        "coproximinal": c.coproximinal,
        "co_chebyshev": c.co_chebyshev,
        "p": c.p,
        "m": c.m,
        "singleton_classes": c.singleton_classes,
    })
}

pub fn star_report(table: &ComponentTable, star: &StarReport) -> Value {
    let classes: Vec<Value> = table
        .classes
        .iter()
        .map(|class| {
            let mut entry = Map::new();
            entry.insert("id".into(), json!(class.id + 1));
            entry.insert("representative".into(), json!(class.representative + 1));
            entry.insert(
                "component".into(),
                rationals(table.component(class.representative)),
            );
            entry.insert("p_plus".into(), one_based(&class.p_plus));
            entry.insert("p_minus".into(), one_based(&class.p_minus));
            entry.insert("is_zero".into(), json!(class.is_zero));
            let satisfying = star.satisfying.iter().find(|s| s.class_id == class.id);
            entry.insert("satisfies".into(), json!(satisfying.is_some()));
            if let Some(s) = satisfying {
                entry.insert(
                    "witness".into(),
                    json!({
                        "beta": rationals(&s.witness.beta),
                        "margin": rational(&s.witness.margin),
                        "via_fast_path": s.via_fast_path,
                    }),
                );
            }
            Value::Object(entry)
        })
        .collect();
    json!({
        "p": star.p,
        "m": star.m,
        "classes": classes,
        "satisfying": Value::Array(star.satisfying.iter().map(|s| json!(s.class_id + 1)).collect()),
    })
}

pub fn system(table: &ComponentTable, system: &ConstraintSystem) -> Value {
    let rows: Vec<Value> = (0..system.rows.rows())
        .map(|s| rationals(system.rows.row(s)))
        .collect();
    let intervals: Vec<Value> = system.interval_scalars().iter().map(interval).collect();
    let representatives: Vec<Value> = system
        .class_ids
        .iter()
        .map(|&id| json!(table.classes[id].representative + 1))
        .collect();
    json!({
        "class_ids": Value::Array(system.class_ids.iter().map(|id| json!(id + 1)).collect()),
        "representatives": representatives,
        "rows": rows,
        "intervals": intervals,
        "exact": system.is_exact(),
    })
}

pub fn kind_name(kind: SolutionKind) -> &'static str {
    match kind {
        SolutionKind::Empty => "Empty",
        SolutionKind::Unique => "Unique",
        SolutionKind::Family => "Family",
    }
}

pub fn solution(s: &SolutionSet) -> Value {
    json!({
        "kind": kind_name(s.kind),
        "exact": s.exact,
        "point": Value::Array(s.point.iter().map(scalar).collect()),
        "diagonal": Value::Array(s.diagonal.iter().map(scalar).collect()),
        "alpha_box": Value::Array(s.alpha_box.iter().map(interval).collect()),
        "diag_ranges": Value::Array(s.diag_ranges.iter().map(interval).collect()),
    })
}

pub fn verification(r: &VerificationReport) -> Value {
    let witness = match &r.failing_witness {
        None => Value::Null,
        Some(FailingWitness::Direction(beta)) => json!({ "direction": rationals(beta) }),
        Some(FailingWitness::Point(c)) => {
            json!({ "point": Value::Array(c.iter().map(|&x| float(x)).collect()) })
        }
    };
    json!({
        "verdict": if r.passed() { "Pass" } else { "Fail" },
        "samples_checked": r.samples_checked,
        "worst_violation": float(r.worst_violation),
        "inconclusive": r.inconclusive,
        "failing_witness": witness,
    })
}

/// Sorts object keys recursively, whatever map type serde_json was built with.
fn canonical(v: &Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(&String, &Value)> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k.clone(), canonical(v)))
                    .collect(),
            )
        }
        Value::Array(items) => Value::Array(items.iter().map(canonical).collect()),
        other => other.clone(),
    }
}

/// Pretty JSON with a trailing newline. Re-emitting a parsed report gives
/// the same bytes.
pub fn render(report: &Value) -> String {
    let mut text = serde_json::to_string_pretty(&canonical(report)).expect("JSON values always serialize");
    text.push('\n');
    text
}
