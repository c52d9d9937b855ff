//! Human-readable rendering of a JSON report.

use std::fmt::Write;

use serde_json::Value;

fn s(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn list(v: &Value) -> String {
    let items: Vec<String> = v
        .as_array()
        .map(|a| a.iter().map(s).collect())
        .unwrap_or_default();
    format!("({})", items.join(", "))
}

fn interval(v: &Value) -> String {
    let (lo, hi) = (s(&v["lo"]), s(&v["hi"]));
    if lo == hi {
        format!("{{{lo}}}")
    } else {
        format!("[{lo}, {hi}]")
    }
}

pub fn render(report: &Value) -> String {
    let mut out = String::new();
    if let Some(c) = report.get("classification") {
        let _ = writeln!(
            out,
            "classification: p = {}, m = {}, coproximinal = {}, co-Chebyshev = {}",
            c["p"], c["m"], c["coproximinal"], c["co_chebyshev"]
        );
    }
    if let Some(star) = report.get("star_report") {
        let _ = writeln!(out, "classes:");
        for class in star["classes"].as_array().into_iter().flatten() {
            let verdict = match class.get("witness") {
                Some(w) => format!(
                    "satisfies, beta = {} (margin {})",
                    list(&w["beta"]),
                    s(&w["margin"])
                ),
                None if class["is_zero"] == Value::Bool(true) => "zero components".into(),
                None => "does not satisfy".into(),
            };
            let _ = writeln!(
                out,
                "  {}: component {} {}, P+ = {}, P- = {}: {verdict}",
                class["id"],
                class["representative"],
                list(&class["component"]),
                list(&class["p_plus"]),
                list(&class["p_minus"]),
            );
        }
    }
    if let Some(system) = report.get("system") {
        let _ = writeln!(out, "constraints:");
        let rows = system["rows"].as_array().into_iter().flatten();
        let intervals = system["intervals"].as_array().into_iter().flatten();
        for (row, iv) in rows.zip(intervals) {
            let _ = writeln!(out, "  <{}, alpha> in {}", list(row), interval(iv));
        }
    }
    if let Some(sol) = report.get("solution") {
        let _ = writeln!(out, "solution: {}", s(&sol["kind"]));
        if sol["kind"] != "Empty" {
            let _ = writeln!(out, "  alpha = {}", list(&sol["point"]));
            let _ = writeln!(out, "  diagonal = {}", list(&sol["diagonal"]));
            let boxes: Vec<String> = sol["alpha_box"]
                .as_array()
                .into_iter()
                .flatten()
                .map(interval)
                .collect();
            let _ = writeln!(out, "  alpha box: {}", boxes.join(" x "));
            for (i, iv) in sol["diag_ranges"].as_array().into_iter().flatten().enumerate() {
                let _ = writeln!(out, "  entry {}: {}", i + 1, interval(iv));
            }
        }
    }
    if let Some(oracle) = report.get("oracle") {
        let _ = writeln!(out, "verification: {}", s(&oracle["verdict"]));
        for (label, key) in [("definition", "definition"), ("orthogonality", "orthogonality")] {
            let r = &oracle[key];
            let _ = write!(
                out,
                "  {label}: {} over {} checks, worst violation {}",
                s(&r["verdict"]),
                r["samples_checked"],
                s(&r["worst_violation"])
            );
            if r["inconclusive"] == Value::Bool(true) {
                out.push_str(" (inconclusive)");
            }
            out.push('\n');
        }
    }
    out
}
