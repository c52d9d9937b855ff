//! Interval-membership systems and their solution sets.
//!
//! `Σ α_k A_k` is a best coapproximation to `T` exactly when, for every
//! dominating class `j`, the representative component satisfies
//! `⟨ã_j, α⟩ ∈ W(ʲT*)`. The set of such `α` is a polyhedron; we report a
//! feasible point, its coordinate bounding box and the induced range of every
//! diagonal entry.

use crate::linalg::{
    self, minimize_lp, rational, solve_lp, Constraint, FloatMatrix, Interval, LpOutcome, LpScalar, Matrix,
    RatMatrix, Rational, Relation,
};
use crate::numerical_range::{numerical_range, star_associated_matrix};
use crate::par::{map_indexed, Execution};
use crate::scalar::Scalar;
use crate::subspace::{
    build_component_table, classify_subspace, star_report, Basis, Classification, ComponentTable,
    DiagonalMatrix, StarReport,
};
use crate::{CoapproxError, Result};

/// Half-width added to float numerical-range endpoints.
pub const DEFAULT_TOL_W: f64 = 1e-9;
/// Largest bounding-box width still reported as a unique solution.
pub const DEFAULT_TOL_UNIQUE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol_w: f64,
    pub tol_unique: f64,
    pub execution: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_w: DEFAULT_TOL_W,
            tol_unique: DEFAULT_TOL_UNIQUE,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub class_ids: Vec<usize>,
    /// One row per dominating class: its representative component.
    pub rows: RatMatrix,
    pub intervals: Vec<Interval<f64>>,
    /// Present when every interval endpoint is a certified rational.
    pub exact_intervals: Option<Vec<Interval<Rational>>>,
    /// All `n` components, for the diagonal ranges.
    pub components: RatMatrix,
}

impl ConstraintSystem {
    pub fn is_exact(&self) -> bool {
        self.exact_intervals.is_some()
    }

    pub fn interval_scalars(&self) -> Vec<Interval<Scalar>> {
        match &self.exact_intervals {
            Some(ivs) => ivs
                .iter()
                .map(|iv| Interval {
                    lo: Scalar::Exact(iv.lo.clone()),
                    hi: Scalar::Exact(iv.hi.clone()),
                })
                .collect(),
            None => self
                .intervals
                .iter()
                .map(|iv| Interval {
                    lo: Scalar::Float(iv.lo),
                    hi: Scalar::Float(iv.hi),
                })
                .collect(),
        }
    }
}

pub fn build_constraint_system(
    table: &ComponentTable,
    report: &StarReport,
    t: &RatMatrix,
) -> Result<ConstraintSystem> {
    let n = table.n();
    if t.rows() != n || t.cols() != n {
        return Err(CoapproxError::DimensionMismatch {
            expected: n,
            found: if t.rows() != n { t.rows() } else { t.cols() },
        });
    }
    let mut class_ids = Vec::with_capacity(report.p);
    let mut rows = Vec::with_capacity(report.p);
    let mut intervals = Vec::with_capacity(report.p);
    let mut exact = Some(Vec::with_capacity(report.p));
    for s in &report.satisfying {
        let class = table.class(s.class_id)?;
        let star = star_associated_matrix(t, class)?;
        let range = numerical_range(&star.matrix)?;
        class_ids.push(s.class_id);
        rows.push(table.component(class.representative).to_vec());
        intervals.push(range.approx);
        exact = match (exact, range.exact) {
            (Some(mut acc), Some(iv)) => {
                acc.push(iv);
                Some(acc)
            }
            _ => None,
        };
    }
    let rows = if rows.is_empty() {
        RatMatrix::zeros(0, table.m())
    } else {
        RatMatrix::from_rows(&rows)?
    };
    Ok(ConstraintSystem {
        class_ids,
        rows,
        intervals,
        exact_intervals: exact,
        components: table.a_tilde.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Empty,
    Unique,
    Family,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub kind: SolutionKind,
    /// Whether the system was solved in exact rational arithmetic.
    pub exact: bool,
    /// Feasible coefficients (the unique one when `kind` is `Unique`).
    pub point: Vec<Scalar>,
    /// Diagonal of `Σ point_k A_k`.
    pub diagonal: Vec<Scalar>,
    pub alpha_box: Vec<Interval<Scalar>>,
    pub diag_ranges: Vec<Interval<Scalar>>,
}

impl SolutionSet {
    fn empty(exact: bool) -> Self {
        Self {
            kind: SolutionKind::Empty,
            exact,
            point: Vec::new(),
            diagonal: Vec::new(),
            alpha_box: Vec::new(),
            diag_ranges: Vec::new(),
        }
    }

    pub fn point_f64(&self) -> Vec<f64> {
        self.point.iter().map(Scalar::to_f64).collect()
    }
}

pub fn solve_constraints(system: &ConstraintSystem, opts: &SolverOptions) -> Result<SolutionSet> {
    match &system.exact_intervals {
        Some(intervals) => {
            let solved = solve_polyhedron(&system.rows, intervals, &system.components, opts.execution)?;
            Ok(match solved {
                None => SolutionSet::empty(true),
                Some(p) => {
                    let unique = p.alpha_box.iter().all(|iv| iv.lo == iv.hi);
                    p.into_solution(unique, true)
                }
            })
        }
        None => {
            let rows = system.rows.to_f64();
            let intervals: Vec<Interval<f64>> =
                system.intervals.iter().map(|iv| iv.widen(opts.tol_w)).collect();
            let components = system.components.to_f64();
            let solved = solve_polyhedron(&rows, &intervals, &components, opts.execution)?;
            Ok(match solved {
                None => SolutionSet::empty(false),
                Some(p) => {
                    let unique = p.alpha_box.iter().all(|iv| iv.width() <= opts.tol_unique);
                    p.into_solution(unique, false)
                }
            })
        }
    }
}

struct Polyhedron<F> {
    point: Vec<F>,
    alpha_box: Vec<Interval<F>>,
    diag_ranges: Vec<Interval<F>>,
    components: Matrix<F>,
}

impl<F: LpScalar + Into<Scalar>> Polyhedron<F> {
    fn into_solution(self, unique: bool, exact: bool) -> SolutionSet {
        let diagonal = (0..self.components.rows())
            .map(|i| {
                self.components
                    .row(i)
                    .iter()
                    .zip(&self.point)
                    .fold(F::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
                    .into()
            })
            .collect();
        let to_scalar = |iv: Interval<F>| Interval {
            lo: iv.lo.into(),
            hi: iv.hi.into(),
        };
        SolutionSet {
            kind: if unique {
                SolutionKind::Unique
            } else {
                SolutionKind::Family
            },
            exact,
            point: self.point.into_iter().map(Into::into).collect(),
            diagonal,
            alpha_box: self.alpha_box.into_iter().map(to_scalar).collect(),
            diag_ranges: self.diag_ranges.into_iter().map(to_scalar).collect(),
        }
    }
}

/// Feasibility plus `2(m + n)` range LPs over `{α : lo ≤ Cα ≤ hi}`.
fn solve_polyhedron<F: LpScalar>(
    rows: &Matrix<F>,
    intervals: &[Interval<F>],
    components: &Matrix<F>,
    exec: Execution,
) -> Result<Option<Polyhedron<F>>> {
    let m = rows.cols();
    let mut constraints = Vec::with_capacity(2 * rows.rows());
    for (s, iv) in intervals.iter().enumerate() {
        let coeffs = rows.row(s).to_vec();
        if iv.lo == iv.hi {
            constraints.push(Constraint::new(coeffs, Relation::Eq, iv.lo.clone()));
        } else {
            constraints.push(Constraint::new(coeffs.clone(), Relation::Ge, iv.lo.clone()));
            constraints.push(Constraint::new(coeffs, Relation::Le, iv.hi.clone()));
        }
    }

    let zero = vec![F::zero(); m];
    let point = match solve_lp(&zero, &constraints)? {
        LpOutcome::Optimal { point, .. } => point,
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    };

    let n = components.rows();
    let objectives: Vec<Vec<F>> = (0..m)
        .map(|k| {
            let mut e = zero.clone();
            e[k] = F::one();
            e
        })
        .chain((0..n).map(|i| components.row(i).to_vec()))
        .collect();
    let extremes = map_indexed(exec, 2 * objectives.len(), |task| {
        let objective = &objectives[task / 2];
        let outcome = if task % 2 == 0 {
            minimize_lp(objective, &constraints)
        } else {
            solve_lp(objective, &constraints)
        };
        match outcome? {
            LpOutcome::Optimal { objective, .. } => Ok(objective),
            other => Err(CoapproxError::InternalInvariantViolated(format!(
                "range LP {} returned {:?} on a feasible system",
                task,
                other.status()
            ))),
        }
    });
    let extremes = extremes.into_iter().collect::<Result<Vec<F>>>()?;
    let mut boxes = extremes.chunks(2).map(|pair| Interval {
        lo: pair[0].clone(),
        hi: pair[1].clone(),
    });
    let alpha_box = boxes.by_ref().take(m).collect();
    let diag_ranges = boxes.collect();
    Ok(Some(Polyhedron {
        point,
        alpha_box,
        diag_ranges,
        components: components.clone(),
    }))
}

/// Table, dominance report and classification of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub table: ComponentTable,
    pub star: StarReport,
    pub classification: Classification,
}

pub fn analyze(basis: &Basis, exec: Execution) -> Result<Analysis> {
    let table = build_component_table(basis)?;
    let star = star_report(&table, exec)?;
    let classification = classify_subspace(&star, &table);
    Ok(Analysis {
        table,
        star,
        classification,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoapproxReport {
    pub table: ComponentTable,
    pub classification: Classification,
    pub star: StarReport,
    pub system: ConstraintSystem,
    pub solution: SolutionSet,
}

/// Every best coapproximation to `t` out of `span(basis)`.
pub fn coapprox(basis: &Basis, t: &RatMatrix, opts: &SolverOptions) -> Result<CoapproxReport> {
    let n = basis.n();
    if t.rows() != n || t.cols() != n {
        return Err(CoapproxError::DimensionMismatch {
            expected: n,
            found: if t.rows() != n { t.rows() } else { t.cols() },
        });
    }
    let Analysis {
        table,
        star,
        classification,
    } = analyze(basis, opts.execution)?;
    let system = build_constraint_system(&table, &star, t)?;
    let solution = solve_constraints(&system, opts)?;
    Ok(CoapproxReport {
        table,
        classification,
        star,
        system,
        solution,
    })
}

/// The diagonal basis `PᵗA_iQ` and target `PᵗTQ`; coefficients found for the
/// reduced problem apply unchanged to the original `A_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub basis: Basis,
    pub target: RatMatrix,
}

const ORTHOGONAL_TOL: f64 = 1e-9;

pub fn reduce_via_orthogonal(
    p: &FloatMatrix,
    q: &FloatMatrix,
    a_list: &[FloatMatrix],
    t: &FloatMatrix,
) -> Result<Reduction> {
    let n = p.rows();
    for m in [p, q, t].into_iter().chain(a_list) {
        if m.rows() != n || m.cols() != n {
            return Err(CoapproxError::DimensionMismatch {
                expected: n,
                found: if m.rows() != n { m.rows() } else { m.cols() },
            });
        }
    }
    for m in [p, q] {
        let deviation = m.transpose().matmul(m)?.max_abs_diff(&FloatMatrix::identity(n));
        if deviation > ORTHOGONAL_TOL {
            return Err(CoapproxError::NotOrthogonal(deviation));
        }
    }
    let pt = p.transpose();
    let sandwich = |m: &FloatMatrix| pt.matmul(m).and_then(|pm| pm.matmul(q));
    let snap = |x: f64| {
        rational::snap(x, ORTHOGONAL_TOL * (1.0 + x.abs())).ok_or_else(|| {
            CoapproxError::Kernel(linalg::KernelError::NumericalFailure(format!(
                "non-finite entry {x}"
            )))
        })
    };

    let mut diagonals = Vec::with_capacity(a_list.len());
    for (index, a) in a_list.iter().enumerate() {
        let d = sandwich(a)?;
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    deviation = deviation.max(d[(i, j)].abs());
                }
            }
        }
        if deviation > ORTHOGONAL_TOL {
            return Err(CoapproxError::NotSimultaneouslyDiagonalized { index, deviation });
        }
        diagonals.push(DiagonalMatrix(
            (0..n).map(|i| snap(d[(i, i)])).collect::<Result<_>>()?,
        ));
    }
    let reduced = sandwich(t)?;
    let target = RatMatrix::from_vec(
        n,
        n,
        reduced
            .as_slice()
            .iter()
            .map(|&x| snap(x))
            .collect::<Result<_>>()?,
    )?;
    Ok(Reduction {
        basis: Basis::new(diagonals)?,
        target,
    })
}

/// Embeds a vector of `ℓ∞ⁿ` as the diagonal matrix with those entries.
pub fn psi(v: &[Rational]) -> DiagonalMatrix {
    DiagonalMatrix(v.to_vec())
}

pub fn linf_basis(spanning: &[Vec<Rational>]) -> Result<Basis> {
    Basis::new(spanning.iter().map(|v| psi(v)).collect())
}

/// Best coapproximations in `ℓ∞ⁿ`: the solution's diagonals are the
/// coapproximating vectors.
pub fn linf_coapprox(
    spanning: &[Vec<Rational>],
    target: &[Rational],
    opts: &SolverOptions,
) -> Result<CoapproxReport> {
    let basis = linf_basis(spanning)?;
    if target.len() != basis.n() {
        return Err(CoapproxError::DimensionMismatch {
            expected: basis.n(),
            found: target.len(),
        });
    }
    let t = RatMatrix::diagonal(target);
    coapprox(&basis, &t, opts)
}

/// Coefficients `α` with `Σ α_k A_k = diag(entries)`, if the diagonal lies in
/// the span.
pub fn coefficients_for_diagonal(basis: &Basis, entries: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if entries.len() != basis.n() {
        return Err(CoapproxError::DimensionMismatch {
            expected: basis.n(),
            found: entries.len(),
        });
    }
    Ok(linalg::solve_exact(&basis.component_matrix(), entries)?)
}
