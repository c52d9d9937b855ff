//! Problem and candidate files.

use std::path::Path;

use coapprox_core::linalg::{parse_rational, RatMatrix, Rational};
use coapprox_core::solver::{coefficients_for_diagonal, linf_basis};
use coapprox_core::Basis;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Diag,
    Linf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    #[serde(default)]
    mode: Option<Mode>,
    basis: Vec<Vec<Value>>,
    #[serde(default)]
    target: Option<Vec<Value>>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub basis: Basis,
    /// Always an `n × n` matrix; linf targets become diagonal matrices.
    pub target: Option<RatMatrix>,
}

impl Problem {
    pub fn target(&self) -> Result<&RatMatrix, CliError> {
        self.target
            .as_ref()
            .ok_or_else(|| CliError::Input("problem file has no target".into()))
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn number(v: &Value, at: &str) -> Result<Rational, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(CliError::Input(format!("{at}: expected a number, found {other}"))),
    };
    parse_rational(&text).map_err(|e| CliError::Input(format!("{at}: {e}")))
}

fn vector(values: &[Value], len: usize, at: &str) -> Result<Vec<Rational>, CliError> {
    if values.len() != len {
        return Err(CliError::Input(format!(
            "{at}: expected {len} entries, found {}",
            values.len()
        )));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| number(v, &format!("{at}[{}]", i + 1)))
        .collect()
}

/// Reads a problem file; `force` overrides the file's mode (the `linf`
/// command), but a file that declares the other mode is rejected.
pub fn load_problem(path: &Path, force: Option<Mode>) -> Result<Problem, CliError> {
    let raw: RawProblem = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mode = match (force, raw.mode) {
        (Some(f), Some(m)) if f != m => {
            return Err(CliError::Input(format!(
                "problem file declares mode {m:?}, command needs {f:?}"
            )))
        }
        (Some(f), _) => f,
        (None, m) => m.unwrap_or_default(),
    };
    let n = raw.n;
    if n == 0 {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    let rows = raw
        .basis
        .iter()
        .enumerate()
        .map(|(k, row)| vector(row, n, &format!("basis[{}]", k + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let basis = match mode {
        Mode::Diag => Basis::from_diagonals(rows)?,
        Mode::Linf => linf_basis(&rows)?,
    };
    let target = match (&raw.target, mode) {
        (None, _) => None,
        (Some(t), Mode::Linf) => Some(RatMatrix::diagonal(&vector(t, n, "target")?)),
        (Some(t), Mode::Diag) => {
            if t.len() != n {
                return Err(CliError::Input(format!(
                    "target: expected {n} rows, found {}",
                    t.len()
                )));
            }
            let mut entries = Vec::with_capacity(n * n);
            for (i, row) in t.iter().enumerate() {
                let at = format!("target[{}]", i + 1);
                let row = row
                    .as_array()
                    .ok_or_else(|| CliError::Input(format!("{at}: expected a row")))?;
                entries.extend(vector(row, n, &at)?);
            }
            Some(RatMatrix::from_vec(n, n, entries).map_err(coapprox_core::CoapproxError::from)?)
        }
    };
    Ok(Problem { basis, target })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCandidate {
    Bare(Vec<Value>),
    Alpha { alpha: Vec<Value> },
    Diagonal { diagonal: Vec<Value> },
}

/// Reads candidate coefficients. A bare array of length `m` is read as
/// coefficients, one of length `n` as a diagonal; `{"alpha": …}` and
/// `{"diagonal": …}` say which explicitly.
pub fn load_candidate(path: &Path, basis: &Basis) -> Result<Vec<Rational>, CliError> {
    let raw: RawCandidate = serde_json::from_str(&read(path)?).map_err(|e| {
        CliError::Input(format!(
            "{}: expected an array or an object with \"alpha\" or \"diagonal\" ({e})",
            path.display()
        ))
    })?;
    let (m, n) = (basis.m(), basis.n());
    let diagonal = match raw {
        RawCandidate::Alpha { alpha } => return vector(&alpha, m, "alpha"),
        RawCandidate::Bare(v) if v.len() == m => return vector(&v, m, "candidate"),
        RawCandidate::Bare(v) if v.len() == n => vector(&v, n, "candidate")?,
        RawCandidate::Bare(v) => {
            return Err(CliError::Input(format!(
                "candidate has {} entries; expected {m} coefficients or {n} diagonal entries",
                v.len()
            )))
        }
        RawCandidate::Diagonal { diagonal } => vector(&diagonal, n, "diagonal")?,
    };
    coefficients_for_diagonal(basis, &diagonal)?
        .ok_or_else(|| CliError::Input("candidate diagonal is not in the span of the basis".into()))
}
