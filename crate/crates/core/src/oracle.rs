//! Independent checks of candidate best coapproximations.
//!
//! Nothing here uses the interval-membership characterization. One check
//! samples the defining inequality `‖y₀ − y‖ ≤ ‖T − y‖` over the subspace.
//! The other tests Birkhoff-James orthogonality `D ⊥ (T − y₀)` for diagonal
//! directions `D` from the subspace, using the unit vectors at which `D`
//! attains its norm.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{rational, spectral_norm, FloatMatrix, Interval, RatMatrix, Rational};
use crate::numerical_range::real_numerical_range;
use crate::par::{map_indexed, Execution};
use crate::subspace::{Basis, DiagonalMatrix, StarReport};
use crate::{CoapproxError, Result};

/// Slack tolerated before a check fails.
pub const PASS_TOL: f64 = 1e-9;
/// Violations above this are definite failures; between the two tolerances
/// a failure is flagged inconclusive.
pub const FAIL_TOL: f64 = 1e-6;

pub const DEFAULT_RANDOM_DIRECTIONS: usize = 50;
const COEFF_RANGE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailingWitness {
    /// Coefficients `β` of a direction `Σ β_k A_k`.
    Direction(Vec<Rational>),
    /// Coefficients `c` of a point `y = Σ c_k A_k` of the subspace.
    Point(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub samples_checked: usize,
    /// Largest violation seen, zero when every check had slack.
    pub worst_violation: f64,
    pub failing_witness: Option<FailingWitness>,
    /// Failed, but only by less than [`FAIL_TOL`].
    pub inconclusive: bool,
}

impl VerificationReport {
    fn from_violations(violations: &[f64], witness_of: impl Fn(usize) -> FailingWitness) -> Self {
        let worst = violations.iter().copied().fold(0.0, f64::max);
        let first_bad = violations.iter().position(|&v| v > PASS_TOL);
        Self {
            verdict: if first_bad.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            },
            samples_checked: violations.len(),
            worst_violation: worst,
            failing_witness: first_bad.map(witness_of),
            inconclusive: first_bad.is_some() && worst <= FAIL_TOL,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// How far `D ⊥_B R` is from holding: the distance from 0 to the numerical
/// range of `M = (d_i / ‖D‖ · r_ij)` over the norm-attainment indices of
/// `D`. Zero exactly when some unit `x` supported there has `⟨Dx, Rx⟩ = 0`.
pub fn bj_violation(d: &DiagonalMatrix, r: &FloatMatrix) -> Result<f64> {
    Ok(signed_form_range(d, r)?.distance(0.0))
}

/// `D ⊥_B R` up to `tol`.
pub fn bj_orthogonal_diag(d: &DiagonalMatrix, r: &FloatMatrix, tol: f64) -> Result<bool> {
    Ok(bj_violation(d, r)? <= tol)
}

fn residual(t: &RatMatrix, basis: &Basis, alpha: &[f64]) -> Result<FloatMatrix> {
    check_target(t, basis, alpha)?;
    let y0 = basis.combine_f64(alpha);
    let mut r = t.to_f64();
    for (i, v) in y0.iter().enumerate() {
        r[(i, i)] -= v;
    }
    Ok(r)
}

fn check_target(t: &RatMatrix, basis: &Basis, alpha: &[f64]) -> Result<()> {
    let n = basis.n();
    if t.rows() != n || t.cols() != n {
        return Err(CoapproxError::DimensionMismatch {
            expected: n,
            found: t.rows(),
        });
    }
    if alpha.len() != basis.m() {
        return Err(CoapproxError::DimensionMismatch {
            expected: basis.m(),
            found: alpha.len(),
        });
    }
    Ok(())
}

fn random_direction(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m)
        .map(|_| rational::ratio(rng.random_range(-1000..=1000), rng.random_range(1..=100)))
        .collect()
}

/// Checks orthogonality of `T − Σ α_k A_k` against every dominating-class
/// witness (in class order) and then `random_directions` seeded random
/// directions. The first failing direction is reported.
pub fn verify_bj_directions(
    alpha: &[f64],
    t: &RatMatrix,
    basis: &Basis,
    report: &StarReport,
    random_directions: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let r = residual(t, basis, alpha)?;
    let mut directions: Vec<Vec<Rational>> =
        report.satisfying.iter().map(|s| s.witness.beta.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while directions.len() < report.satisfying.len() + random_directions {
        let beta = random_direction(&mut rng, basis.m());
        if !basis.combine(&beta).is_zero() {
            directions.push(beta);
        }
    }
    let violations = directions
        .iter()
        .map(|beta| bj_violation(&basis.combine(beta), &r))
        .collect::<Result<Vec<f64>>>()?;
    Ok(VerificationReport::from_violations(&violations, |i| {
        FailingWitness::Direction(directions[i].clone())
    }))
}

/// Samples `y = Σ c_k A_k` with `c` uniform on `[−10, 10]^m` and checks
/// `‖y₀ − y‖ ≤ ‖T − y‖` in the operator norm. Sample `i` draws from its own
/// stream of the seeded generator, so results do not depend on scheduling.
pub fn verify_by_definition(
    alpha: &[f64],
    t: &RatMatrix,
    basis: &Basis,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<VerificationReport> {
    check_target(t, basis, alpha)?;
    let m = basis.m();
    let tf = t.to_f64();
    let y0 = basis.combine_f64(alpha);

    let draw = |i: usize| -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        (0..m)
            .map(|_| rng.random_range(-COEFF_RANGE..=COEFF_RANGE))
            .collect()
    };
    let outcomes = map_indexed(exec, samples, |i| {
        let y = basis.combine_f64(&draw(i));
        let near = y0.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let mut shifted = tf.clone();
        for (k, v) in y.iter().enumerate() {
            shifted[(k, k)] -= v;
        }
        let far = spectral_norm(&shifted);
        if far.is_nan() {
            return Err(CoapproxError::Kernel(crate::KernelError::NumericalFailure(
                "spectral norm did not converge".into(),
            )));
        }
        Ok(near - far)
    });
    let violations = outcomes.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(VerificationReport::from_violations(&violations, |i| {
        FailingWitness::Point(draw(i))
    }))
}

/// Interval of `⟨Dx, Rx⟩ / ‖D‖` over unit `x` supported on the
/// norm-attainment set of `D`.
pub fn signed_form_range(d: &DiagonalMatrix, r: &FloatMatrix) -> Result<Interval<f64>> {
    let n = d.dim();
    if r.rows() != n || r.cols() != n {
        return Err(CoapproxError::DimensionMismatch {
            expected: n,
            found: r.rows(),
        });
    }
    let norm = d.norm();
    if norm.is_zero() {
        return Err(CoapproxError::ZeroDirection);
    }
    let attaining: Vec<usize> = (0..n).filter(|&i| d.0[i].abs() == norm).collect();
    let k = attaining.len();
    let m = FloatMatrix::from_fn(k, k, |a, b| {
        let sign = if d.0[attaining[a]].is_negative() {
            -1.0
        } else {
            1.0
        };
        sign * r[(attaining[a], attaining[b])]
    });
    Ok(real_numerical_range(&m)?)
}
