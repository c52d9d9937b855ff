//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! The tableau is generic over the scalar: [`Rational`] gives exact answers,
//! `f64` works to the tolerance [`LP_EPS`]. All decision variables are free;
//! bounds are written as ordinary constraints.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Num, Signed};

use super::rational::{to_f64, Rational};
use super::small::{tracking_overflow, SmallRational};
use super::KernelError;

/// Float-mode tolerance for pivots, reduced costs and certification.
pub const LP_EPS: f64 = 1e-9;

const MAX_PIVOTS: usize = 200_000;

/// Scalar field the simplex can run over.
pub trait LpScalar: Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync {
    const EXACT: bool;

    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn approx(&self) -> f64;
    /// `self -= a * b`.
    fn sub_product(&mut self, a: &Self, b: &Self);
    fn div_by(&mut self, d: &Self);

    /// A cheaper way to reach the same exact answer, when one applies.
    fn solve_fast(
        _objective: &[Self],
        _constraints: &[Constraint<Self>],
    ) -> Option<Result<LpOutcome<Self>, KernelError>> {
        None
    }

    fn is_negligible(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl LpScalar for Rational {
    const EXACT: bool = true;

    fn is_pos(&self) -> bool {
        self.is_positive()
    }

    fn is_neg(&self) -> bool {
        self.is_negative()
    }

    fn approx(&self) -> f64 {
        to_f64(self)
    }

    fn sub_product(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn div_by(&mut self, d: &Self) {
        *self /= d;
    }

    /// Runs the simplex over `i64` rationals; `None` if the data do not fit
    /// or any intermediate value overflowed.
    fn solve_fast(
        objective: &[Self],
        constraints: &[Constraint<Self>],
    ) -> Option<Result<LpOutcome<Self>, KernelError>> {
        let small = |v: &[Rational]| v.iter().map(SmallRational::from_big).collect::<Option<Vec<_>>>();
        let objective = small(objective)?;
        let constraints = constraints
            .iter()
            .map(|c| {
                Some(Constraint::new(
                    small(&c.coeffs)?,
                    c.relation,
                    SmallRational::from_big(&c.rhs)?,
                ))
            })
            .collect::<Option<Vec<_>>>()?;
        let (outcome, overflowed) =
            tracking_overflow(|| Tableau::build(objective.len(), &constraints).optimize(&objective));
        if overflowed {
            return None;
        }
        let big = |v: Vec<SmallRational>| v.iter().map(SmallRational::to_big).collect();
        Some(outcome.map(|o| match o {
            LpOutcome::Optimal { objective, point } => LpOutcome::Optimal {
                objective: objective.to_big(),
                point: big(point),
            },
            LpOutcome::Infeasible => LpOutcome::Infeasible,
            LpOutcome::Unbounded => LpOutcome::Unbounded,
        }))
    }
}

impl LpScalar for f64 {
    const EXACT: bool = false;

    fn is_pos(&self) -> bool {
        *self > LP_EPS
    }

    fn is_neg(&self) -> bool {
        *self < -LP_EPS
    }

    fn approx(&self) -> f64 {
        *self
    }

    fn sub_product(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }

    fn div_by(&mut self, d: &Self) {
        *self /= d;
    }
}

impl LpScalar for SmallRational {
    const EXACT: bool = true;

    fn is_pos(&self) -> bool {
        self.is_positive()
    }

    fn is_neg(&self) -> bool {
        self.is_negative()
    }

    fn approx(&self) -> f64 {
        to_f64(&self.to_big())
    }

    fn sub_product(&mut self, a: &Self, b: &Self) {
        *self = &*self - &(a * b);
    }

    fn div_by(&mut self, d: &Self) {
        *self = &*self / d;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<F> {
    pub coeffs: Vec<F>,
    pub relation: Relation,
    pub rhs: F,
}

impl<F> Constraint<F> {
    pub fn new(coeffs: Vec<F>, relation: Relation, rhs: F) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<F> {
    Optimal { objective: F, point: Vec<F> },
    Infeasible,
    Unbounded,
}

impl<F> LpOutcome<F> {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn point(&self) -> Option<&[F]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn objective(&self) -> Option<&F> {
        match self {
            LpOutcome::Optimal { objective, .. } => Some(objective),
            _ => None,
        }
    }
}

/// Maximizes `objective · x` over free `x` subject to `constraints`.
pub fn solve_lp<F: LpScalar>(
    objective: &[F],
    constraints: &[Constraint<F>],
) -> Result<LpOutcome<F>, KernelError> {
    let num_vars = objective.len();
    for c in constraints {
        if c.coeffs.len() != num_vars {
            return Err(KernelError::DimensionMismatch {
                expected: num_vars,
                found: c.coeffs.len(),
            });
        }
    }
    let outcome = match F::solve_fast(objective, constraints) {
        Some(outcome) => outcome?,
        None => Tableau::build(num_vars, constraints).optimize(objective)?,
    };
    if let LpOutcome::Optimal { point, .. } = &outcome {
        certify(point, constraints)?;
    }
    Ok(outcome)
}

/// Minimizes `objective · x`; the reported objective is the minimum.
pub fn minimize_lp<F: LpScalar>(
    objective: &[F],
    constraints: &[Constraint<F>],
) -> Result<LpOutcome<F>, KernelError> {
    let negated: Vec<F> = objective.iter().cloned().map(Neg::neg).collect();
    Ok(match solve_lp(&negated, constraints)? {
        LpOutcome::Optimal { objective, point } => LpOutcome::Optimal {
            objective: -objective,
            point,
        },
        other => other,
    })
}

fn certify<F: LpScalar>(point: &[F], constraints: &[Constraint<F>]) -> Result<(), KernelError> {
    for (row, c) in constraints.iter().enumerate() {
        let mut lhs = F::zero();
        let mut scale = 1.0 + c.rhs.approx().abs();
        for (a, x) in c.coeffs.iter().zip(point) {
            let term = a.clone() * x.clone();
            scale += term.approx().abs();
            lhs = lhs + term;
        }
        let gap = lhs - c.rhs.clone();
        let violated = if F::EXACT {
            match c.relation {
                Relation::Le => gap.is_pos(),
                Relation::Ge => gap.is_neg(),
                Relation::Eq => !gap.is_zero(),
            }
        } else {
            let g = gap.approx();
            let tol = LP_EPS * scale;
            match c.relation {
                Relation::Le => g > tol,
                Relation::Ge => g < -tol,
                Relation::Eq => g.abs() > tol,
            }
        };
        if violated {
            return Err(KernelError::NumericalFailure(format!(
                "simplex point violates constraint {row} by {:e}",
                gap.approx()
            )));
        }
    }
    Ok(())
}

struct Tableau<F> {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<F>>,
    /// Reduced costs `z_j - c_j`; the last entry is the objective value.
    cost: Vec<F>,
    basis: Vec<usize>,
    num_vars: usize,
    first_artificial: usize,
    width: usize,
}

impl<F: LpScalar> Tableau<F> {
    fn build(num_vars: usize, constraints: &[Constraint<F>]) -> Self {
        let slack_count = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let artificial_count = constraints
            .iter()
            .filter(|c| {
                let flipped = c.rhs < F::zero();
                match c.relation {
                    Relation::Le => flipped,
                    Relation::Ge => !flipped,
                    Relation::Eq => true,
                }
            })
            .count();
        let first_slack = 2 * num_vars;
        let first_artificial = first_slack + slack_count;
        let width = first_artificial + artificial_count;

        let mut rows = Vec::with_capacity(constraints.len());
        let mut basis = Vec::with_capacity(constraints.len());
        let (mut next_slack, mut next_artificial) = (first_slack, first_artificial);
        for c in constraints {
            let flip = c.rhs < F::zero();
            let sign = |v: F| if flip { -v } else { v };
            let mut row = vec![F::zero(); width + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = sign(a.clone());
                row[num_vars + j] = -sign(a.clone());
            }
            row[width] = sign(c.rhs.clone());
            let relation = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            match relation {
                Relation::Le => {
                    row[next_slack] = F::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -F::one();
                    next_slack += 1;
                    row[next_artificial] = F::one();
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
                Relation::Eq => {
                    row[next_artificial] = F::one();
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
            }
            rows.push(row);
        }
        Self {
            rows,
            cost: vec![F::zero(); width + 1],
            basis,
            num_vars,
            first_artificial,
            width,
        }
    }

    fn optimize(mut self, objective: &[F]) -> Result<LpOutcome<F>, KernelError> {
        if self.first_artificial < self.width {
            let phase_one: Vec<F> = (0..self.width)
                .map(|j| {
                    if j >= self.first_artificial {
                        -F::one()
                    } else {
                        F::zero()
                    }
                })
                .collect();
            self.price(&phase_one);
            if self.run(self.width)? == LpStatus::Unbounded {
                return Err(KernelError::NumericalFailure(
                    "phase one reported an unbounded auxiliary problem".into(),
                ));
            }
            if self.cost[self.width].is_neg() {
                return Ok(LpOutcome::Infeasible);
            }
            self.evict_artificials();
            self.drop_artificials();
        }

        let mut phase_two = vec![F::zero(); self.width];
        for (j, c) in objective.iter().enumerate() {
            phase_two[j] = c.clone();
            phase_two[self.num_vars + j] = -c.clone();
        }
        self.price(&phase_two);
        if self.run(self.first_artificial)? == LpStatus::Unbounded {
            return Ok(LpOutcome::Unbounded);
        }

        let mut point = vec![F::zero(); self.num_vars];
        for (row, &var) in self.rows.iter().zip(&self.basis) {
            let value = row[self.width].clone();
            if var < self.num_vars {
                point[var] = point[var].clone() + value;
            } else if var < 2 * self.num_vars {
                let j = var - self.num_vars;
                point[j] = point[j].clone() - value;
            }
        }
        let objective_value = objective
            .iter()
            .zip(&point)
            .fold(F::zero(), |acc, (c, x)| acc + c.clone() * x.clone());
        Ok(LpOutcome::Optimal {
            objective: objective_value,
            point,
        })
    }

    fn price(&mut self, costs: &[F]) {
        for j in 0..=self.width {
            let mut z = F::zero();
            for (row, &b) in self.rows.iter().zip(&self.basis) {
                if !costs[b].is_zero() && !row[j].is_zero() {
                    z = z + costs[b].clone() * row[j].clone();
                }
            }
            self.cost[j] = if j < self.width { z - costs[j].clone() } else { z };
        }
    }

    /// Bland iterations over columns `< limit` until optimal or unbounded.
    fn run(&mut self, limit: usize) -> Result<LpStatus, KernelError> {
        for _ in 0..MAX_PIVOTS {
            let Some(entering) = (0..limit).find(|&j| self.cost[j].is_neg()) else {
                return Ok(LpStatus::Optimal);
            };
            let mut leaving: Option<(usize, F)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[entering].is_pos() {
                    continue;
                }
                let ratio = row[self.width].clone() / row[entering].clone();
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        let diff = ratio.clone() - best_ratio.clone();
                        diff.is_neg() || (diff.is_negligible() && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, entering),
                None => return Ok(LpStatus::Unbounded),
            }
        }
        Err(KernelError::CycleGuardExceeded(MAX_PIVOTS))
    }

    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            let replacement = (0..self.first_artificial).find(|&j| !self.rows[i][j].is_negligible());
            match replacement {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    // Redundant equality row.
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    /// Artificial columns never re-enter after phase one.
    fn drop_artificials(&mut self) {
        let keep = self.first_artificial;
        for row in self.rows.iter_mut().chain(std::iter::once(&mut self.cost)) {
            let rhs = row.pop().expect("tableau rows end with the right-hand side");
            row.truncate(keep);
            row.push(rhs);
        }
        self.width = keep;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        let mut pivot_row = std::mem::take(&mut self.rows[r]);
        for v in pivot_row.iter_mut().filter(|v| !v.is_zero()) {
            v.div_by(&p);
        }
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut Vec<F>| {
            if row[c].is_zero() {
                return;
            }
            let factor = row[c].clone();
            for &j in &support {
                row[j].sub_product(&factor, &pivot_row[j]);
            }
            if !F::EXACT {
                // Keep the eliminated column exactly zero in float mode.
                row[c] = F::zero();
            }
        };
        for row in self.rows.iter_mut().filter(|row| !row.is_empty()) {
            eliminate(row);
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, ratio};

    fn le(coeffs: Vec<Rational>, rhs: Rational) -> Constraint<Rational> {
        Constraint::new(coeffs, Relation::Le, rhs)
    }

    fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Constraint<Rational> {
        Constraint::new(coeffs, Relation::Ge, rhs)
    }

    #[test]
    fn single_bound() {
        let out = solve_lp(&[int(1)], &[le(vec![int(1)], int(1))]).unwrap();
        assert_eq!(out.objective(), Some(&int(1)));
    }

    #[test]
    fn contradictory_bounds() {
        let out = solve_lp(&[int(0)], &[le(vec![int(1)], int(-1)), ge(vec![int(1)], int(1))]).unwrap();
        assert_eq!(out.status(), LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let out = solve_lp(&[int(1), int(1)], &[le(vec![int(1), int(-1)], int(2))]).unwrap();
        assert_eq!(out.status(), LpStatus::Unbounded);
    }

    #[test]
    fn free_variables_go_negative() {
        // min x s.t. x >= -3/2
        let out = minimize_lp(&[int(1)], &[ge(vec![int(1)], ratio(-3, 2))]).unwrap();
        assert_eq!(out.objective(), Some(&ratio(-3, 2)));
        assert_eq!(out.point().unwrap(), &[ratio(-3, 2)]);
    }

    #[test]
    fn equality_with_redundant_row() {
        // x + y = 2 stated twice, maximize x with y >= 1/2.
        let eq = Constraint::new(vec![int(1), int(1)], Relation::Eq, int(2));
        let out = solve_lp(
            &[int(1), int(0)],
            &[eq.clone(), eq, ge(vec![int(0), int(1)], ratio(1, 2))],
        )
        .unwrap();
        assert_eq!(out.objective(), Some(&ratio(3, 2)));
    }

    #[test]
    fn textbook_problem_exact_and_float_agree() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
        let rows = [(vec![1, 0], 4), (vec![0, 2], 12), (vec![3, 2], 18)];
        let exact: Vec<_> = rows
            .iter()
            .map(|(a, b)| le(a.iter().map(|&v| int(v)).collect(), int(*b)))
            .collect();
        let out = solve_lp(&[int(3), int(5)], &exact).unwrap();
        assert_eq!(out.objective(), Some(&int(36)));
        assert_eq!(out.point().unwrap(), &[int(2), int(6)]);

        let float: Vec<_> = rows
            .iter()
            .map(|(a, b)| Constraint::new(a.iter().map(|&v| v as f64).collect(), Relation::Le, *b as f64))
            .collect();
        let out = solve_lp(&[3.0, 5.0], &float).unwrap();
        assert!((out.objective().unwrap() - 36.0).abs() < 1e-9);
    }

    #[test]
    fn word_overflow_falls_back_to_big_rationals() {
        // 1/p + 1/q has a denominator beyond i64 for these coprime p, q, so the
        // machine-word pass must give up and the big-rational pass answer.
        let (p, q) = (4_000_000_001i64, 4_000_000_003i64);
        let cons = vec![le(vec![int(p), int(0)], int(1)), le(vec![int(0), int(q)], int(1))];
        let objective = [int(1), int(1)];
        assert!(Rational::solve_fast(&objective, &cons).is_none());
        let out = solve_lp(&objective, &cons).unwrap();
        assert_eq!(out.objective(), Some(&(ratio(1, p) + ratio(1, q))));
        assert_eq!(out.point().unwrap(), &[ratio(1, p), ratio(1, q)]);
    }

    #[test]
    fn word_sized_problems_take_the_fast_path() {
        let cons = vec![
            le(vec![int(2), int(1)], int(7)),
            ge(vec![int(1), int(-1)], int(-2)),
        ];
        let fast = Rational::solve_fast(&[int(1), int(1)], &cons).unwrap().unwrap();
        assert_eq!(fast, solve_lp(&[int(1), int(1)], &cons).unwrap());
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let c = [ratio(3, 4), int(-150), ratio(1, 50), int(-6)];
        let cons = vec![
            le(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], int(0)),
            le(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], int(0)),
            le(vec![int(0), int(0), int(1), int(0)], int(1)),
            ge(vec![int(1), int(0), int(0), int(0)], int(0)),
            ge(vec![int(0), int(1), int(0), int(0)], int(0)),
            ge(vec![int(0), int(0), int(1), int(0)], int(0)),
            ge(vec![int(0), int(0), int(0), int(1)], int(0)),
        ];
        let out = solve_lp(&c, &cons).unwrap();
        assert_eq!(out.objective(), Some(&ratio(1, 20)));
    }

    #[test]
    fn dimension_mismatch() {
        let err = solve_lp(&[int(1), int(2)], &[le(vec![int(1)], int(1))]).unwrap_err();
        assert!(matches!(err, KernelError::DimensionMismatch { .. }));
    }
}
