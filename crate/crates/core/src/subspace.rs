//! Component tables, sign-equivalence classes and the dominance
//! (⋆-Property) test for subspaces spanned by diagonal matrices.

use num_traits::{One, Signed, Zero};

use crate::linalg::{self, dot, nullspace, Constraint, LpOutcome, RatMatrix, Rational, Relation};
use crate::par::{map_indexed, Execution};
use crate::{CoapproxError, Result};

/// A diagonal matrix, stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMatrix(pub Vec<Rational>);

impl DiagonalMatrix {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Operator norm, `max |d_i|`.
    pub fn norm(&self) -> Rational {
        self.0
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Basis `A_1, …, A_m` of a subspace of `n × n` diagonal matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    n: usize,
    matrices: Vec<DiagonalMatrix>,
}

impl Basis {
    /// Checks shapes only; linear independence is checked when the component
    /// table is built.
    pub fn new(matrices: Vec<DiagonalMatrix>) -> Result<Self> {
        let n = matrices.first().ok_or(CoapproxError::EmptyBasis)?.dim();
        if n == 0 {
            return Err(CoapproxError::EmptyBasis);
        }
        for a in &matrices {
            if a.dim() != n {
                return Err(CoapproxError::DimensionMismatch {
                    expected: n,
                    found: a.dim(),
                });
            }
        }
        Ok(Self { n, matrices })
    }

    pub fn from_diagonals(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(rows.into_iter().map(DiagonalMatrix).collect())
    }

    /// `E_1, …, E_n`.
    pub fn standard(n: usize) -> Self {
        let matrices = (0..n)
            .map(|k| {
                DiagonalMatrix(
                    (0..n)
                        .map(|i| if i == k { Rational::one() } else { Rational::zero() })
                        .collect(),
                )
            })
            .collect();
        Self { n, matrices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[DiagonalMatrix] {
        &self.matrices
    }

    /// `Σ c_k A_k`.
    pub fn combine(&self, coeffs: &[Rational]) -> DiagonalMatrix {
        DiagonalMatrix(
            (0..self.n)
                .map(|i| {
                    self.matrices
                        .iter()
                        .zip(coeffs)
                        .fold(Rational::zero(), |acc, (a, c)| acc + &a.0[i] * c)
                })
                .collect(),
        )
    }

    pub fn combine_f64(&self, coeffs: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                self.matrices
                    .iter()
                    .zip(coeffs)
                    .map(|(a, c)| linalg::rational::to_f64(&a.0[i]) * c)
                    .sum()
            })
            .collect()
    }

    /// The `n × m` matrix whose `i`-th row is the `i`-th component.
    pub fn component_matrix(&self) -> RatMatrix {
        RatMatrix::from_fn(self.n, self.m(), |i, k| self.matrices[k].0[i].clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Components equal, up to sign, to the representative's.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivClass {
    pub id: usize,
    pub representative: usize,
    pub p_plus: Vec<usize>,
    pub p_minus: Vec<usize>,
    pub is_zero: bool,
}

impl EquivClass {
    /// `P⁺ ∪ P⁻`, ascending.
    pub fn members(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.p_plus.iter().chain(&self.p_minus).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn is_singleton(&self) -> bool {
        self.p_plus.len() + self.p_minus.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTable {
    pub a_tilde: RatMatrix,
    pub classes: Vec<EquivClass>,
    /// Class id and sign of every component index.
    pub class_of: Vec<(usize, Sign)>,
}

impl ComponentTable {
    pub fn n(&self) -> usize {
        self.a_tilde.rows()
    }

    pub fn m(&self) -> usize {
        self.a_tilde.cols()
    }

    pub fn component(&self, i: usize) -> &[Rational] {
        self.a_tilde.row(i)
    }

    pub fn class(&self, id: usize) -> Result<&EquivClass> {
        self.classes.get(id).ok_or(CoapproxError::UnknownClass(id))
    }

    pub fn representative_row(&self, id: usize) -> Result<&[Rational]> {
        Ok(self.component(self.class(id)?.representative))
    }

    /// Class containing component `i` (0-based).
    pub fn class_of_index(&self, i: usize) -> &EquivClass {
        &self.classes[self.class_of[i].0]
    }

    /// `⟨ã_i, α⟩` for every component.
    pub fn diagonal_of(&self, alpha: &[Rational]) -> Vec<Rational> {
        (0..self.n()).map(|i| dot(self.component(i), alpha)).collect()
    }
}

pub fn build_component_table(basis: &Basis) -> Result<ComponentTable> {
    let a_tilde = basis.component_matrix();
    let m = basis.m();
    let rank = linalg::rank(&a_tilde);
    if rank < m {
        return Err(CoapproxError::DependentBasis { rank, m });
    }

    let mut classes: Vec<EquivClass> = Vec::new();
    let mut class_of = Vec::with_capacity(basis.n());
    for i in 0..basis.n() {
        let row = a_tilde.row(i);
        let is_zero = row.iter().all(Zero::is_zero);
        let found = classes.iter().find_map(|c| {
            let rep = a_tilde.row(c.representative);
            if rep == row {
                Some((c.id, Sign::Plus))
            } else if rep.iter().zip(row).all(|(r, x)| *r == -x.clone()) {
                Some((c.id, Sign::Minus))
            } else {
                None
            }
        });
        let (id, sign) = match found {
            Some(hit) => hit,
            None => {
                let id = classes.len();
                classes.push(EquivClass {
                    id,
                    representative: i,
                    p_plus: Vec::new(),
                    p_minus: Vec::new(),
                    is_zero,
                });
                (id, Sign::Plus)
            }
        };
        match sign {
            Sign::Plus => classes[id].p_plus.push(i),
            Sign::Minus => classes[id].p_minus.push(i),
        }
        class_of.push((id, sign));
    }
    Ok(ComponentTable {
        a_tilde,
        classes,
        class_of,
    })
}

/// Coefficients `β` under which a class strictly dominates, and the margin
/// `⟨β, ã_rep⟩ − max_j |⟨β, ã_j⟩|` over all other classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub beta: Vec<Rational>,
    pub margin: Rational,
}

/// `⟨β, ã_rep⟩ − max |⟨β, ã_j⟩|` over representatives of the other classes.
pub fn dominance_margin(table: &ComponentTable, class_id: usize, beta: &[Rational]) -> Result<Rational> {
    let own = dot(table.representative_row(class_id)?, beta);
    let rival = table
        .classes
        .iter()
        .filter(|c| c.id != class_id)
        .map(|c| dot(table.component(c.representative), beta).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(own - rival)
}

/// Decides the ⋆-Property for one class by exact linear programming:
/// maximize `t` subject to `⟨β, ã_i ∓ ã_j⟩ ≥ t` for every other
/// representative `ã_j`, `⟨β, ã_i⟩ ≥ t` and `−1 ≤ β_k ≤ 1`.
/// The class satisfies the property iff the optimum is positive.
pub fn star_property_witness(table: &ComponentTable, class_id: usize) -> Result<Option<Witness>> {
    let class = table.class(class_id)?;
    if class.is_zero {
        return Err(CoapproxError::ZeroClass(class_id));
    }
    let m = table.m();
    let own = table.component(class.representative);
    let row = |coeffs: Vec<Rational>| {
        let mut full = coeffs;
        full.push(-Rational::one());
        Constraint::new(full, Relation::Ge, Rational::zero())
    };

    let mut constraints = vec![row(own.to_vec())];
    for other in table.classes.iter().filter(|c| c.id != class_id) {
        let rival = table.component(other.representative);
        constraints.push(row(own.iter().zip(rival).map(|(a, b)| a - b).collect()));
        constraints.push(row(own.iter().zip(rival).map(|(a, b)| a + b).collect()));
    }
    for k in 0..m {
        let mut unit = vec![Rational::zero(); m + 1];
        unit[k] = Rational::one();
        constraints.push(Constraint::new(unit.clone(), Relation::Le, Rational::one()));
        constraints.push(Constraint::new(unit, Relation::Ge, -Rational::one()));
    }
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = Rational::one();

    match linalg::solve_lp(&objective, &constraints)? {
        LpOutcome::Optimal { objective, mut point } if objective.is_positive() => {
            point.truncate(m);
            Ok(Some(Witness {
                beta: point,
                margin: objective,
            }))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        other => Err(CoapproxError::InternalInvariantViolated(format!(
            "dominance LP for class {class_id} returned {:?}",
            other.status()
        ))),
    }
}

/// Sufficient test: if the representative lies outside the span of every
/// other representative, a vector orthogonal to that span but not to the
/// representative is a witness. `None` means inconclusive.
pub fn star_fast_path(table: &ComponentTable, class_id: usize) -> Option<Vec<Rational>> {
    let class = table.class(class_id).ok()?;
    if class.is_zero {
        return None;
    }
    let own = table.component(class.representative);
    let others: Vec<Vec<Rational>> = table
        .classes
        .iter()
        .filter(|c| c.id != class_id && !c.is_zero)
        .map(|c| table.component(c.representative).to_vec())
        .collect();
    let span = if others.is_empty() {
        RatMatrix::from_vec(0, table.m(), Vec::new()).ok()?
    } else {
        RatMatrix::from_rows(&others).ok()?
    };
    let v = nullspace(&span).into_iter().find(|v| !dot(v, own).is_zero())?;
    let scale = v.iter().map(Signed::abs).max()?;
    let signed_scale = if dot(&v, own).is_negative() { -scale } else { scale };
    Some(v.into_iter().map(|x| x / &signed_scale).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatisfyingClass {
    pub class_id: usize,
    pub witness: Witness,
    pub via_fast_path: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarReport {
    pub satisfying: Vec<SatisfyingClass>,
    /// Classes without a witness, including the zero class if present.
    pub non_satisfying: Vec<usize>,
    pub p: usize,
    pub m: usize,
}

impl StarReport {
    pub fn witness(&self, class_id: usize) -> Option<&Witness> {
        self.satisfying
            .iter()
            .find(|s| s.class_id == class_id)
            .map(|s| &s.witness)
    }

    pub fn satisfying_ids(&self) -> Vec<usize> {
        self.satisfying.iter().map(|s| s.class_id).collect()
    }
}

pub fn star_report(table: &ComponentTable, exec: Execution) -> Result<StarReport> {
    let verdicts = map_indexed(
        exec,
        table.classes.len(),
        |id| -> Result<Option<SatisfyingClass>> {
            if table.classes[id].is_zero {
                return Ok(None);
            }
            if let Some(beta) = star_fast_path(table, id) {
                let margin = dominance_margin(table, id, &beta)?;
                return Ok(Some(SatisfyingClass {
                    class_id: id,
                    witness: Witness { beta, margin },
                    via_fast_path: true,
                }));
            }
            Ok(star_property_witness(table, id)?.map(|witness| SatisfyingClass {
                class_id: id,
                witness,
                via_fast_path: false,
            }))
        },
    );

    let mut satisfying = Vec::new();
    let mut non_satisfying = Vec::new();
    for (id, verdict) in verdicts.into_iter().enumerate() {
        match verdict? {
            Some(s) => satisfying.push(s),
            None => non_satisfying.push(id),
        }
    }
    let p = satisfying.len();
    let m = table.m();
    if p == 0 || p < m {
        return Err(CoapproxError::InternalInvariantViolated(format!(
            "{p} dominating classes for a basis of size {m}"
        )));
    }
    Ok(StarReport {
        satisfying,
        non_satisfying,
        p,
        m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub coproximinal: bool,
    pub co_chebyshev: bool,
    pub p: usize,
    pub m: usize,
    /// Every dominating class has exactly one member.
    pub singleton_classes: bool,
}

pub fn classify_subspace(report: &StarReport, table: &ComponentTable) -> Classification {
    let coproximinal = report.p == report.m;
    let singleton_classes = report
        .satisfying
        .iter()
        .all(|s| table.classes[s.class_id].is_singleton());
    Classification {
        coproximinal,
        co_chebyshev: coproximinal && singleton_classes,
        p: report.p,
        m: report.m,
        singleton_classes,
    }
}
