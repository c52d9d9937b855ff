//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use num_traits::{Signed, Zero};

use super::matrix::{FloatMatrix, Interval, RatMatrix};
use super::rational::{rationalize, Rational};
use super::KernelError;

/// Largest tolerated `|s_ij - s_ji|` for a matrix treated as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

const OFF_DIAGONAL_RTOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: FloatMatrix,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    pub fn interval(&self) -> Interval<f64> {
        Interval::new(self.values[0], *self.values.last().unwrap())
    }
}

fn check_symmetric(s: &FloatMatrix) -> Result<(), KernelError> {
    if !s.is_square() {
        return Err(KernelError::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let n = s.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((s[(i, j)] - s[(j, i)]).abs());
        }
    }
    if worst > SYMMETRY_TOL {
        return Err(KernelError::NotSymmetric(worst));
    }
    Ok(())
}

pub fn symmetric_eigen(s: &FloatMatrix) -> Result<SymmetricEigen, KernelError> {
    check_symmetric(s)?;
    let n = s.rows();
    if n == 0 {
        return Err(KernelError::Empty);
    }
    let mut a = s.symmetric_part();
    let mut v = FloatMatrix::identity(n);
    let threshold = OFF_DIAGONAL_RTOL * a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if off_diagonal_norm(&a) > threshold {
        return Err(KernelError::NumericalFailure(
            "Jacobi sweeps did not converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let vectors = FloatMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(SymmetricEigen { values, vectors })
}

fn off_diagonal_norm(a: &FloatMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Zeroes `a[p][q]` with a plane rotation, accumulating it into `v`.
fn rotate(a: &mut FloatMatrix, v: &mut FloatMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// `[λ_min(S), λ_max(S)]` of a symmetric matrix.
pub fn symmetric_eigen_interval(s: &FloatMatrix) -> Result<Interval<f64>, KernelError> {
    Ok(symmetric_eigen(s)?.interval())
}

/// Tries to certify the extreme eigenvalues of a rational symmetric matrix as
/// exact rationals. Each float endpoint is rationalized and accepted only if
/// `S - λI` is exactly singular and semidefinite of the right sign.
pub fn certify_eigen_interval(s: &RatMatrix, approx: &Interval<f64>) -> Option<Interval<Rational>> {
    let lo = certify_endpoint(s, approx.lo, Extreme::Min)?;
    let hi = certify_endpoint(s, approx.hi, Extreme::Max)?;
    Some(Interval::new(lo, hi))
}

#[derive(Clone, Copy)]
enum Extreme {
    Min,
    Max,
}

fn certify_endpoint(s: &RatMatrix, approx: f64, which: Extreme) -> Option<Rational> {
    let scale = 1.0 + approx.abs();
    let lambda = rationalize(approx, 1_000_000, 1e-9 * scale)?;
    let n = s.rows();
    let shifted = RatMatrix::from_fn(n, n, |i, j| {
        let v = match which {
            Extreme::Min => s[(i, j)].clone(),
            Extreme::Max => -s[(i, j)].clone(),
        };
        if i == j {
            match which {
                Extreme::Min => v - &lambda,
                Extreme::Max => v + &lambda,
            }
        } else {
            v
        }
    });
    match semidefinite_rank(&shifted) {
        Some(rank) if rank < n => Some(lambda),
        _ => None,
    }
}

/// Exact rank of a rational symmetric matrix when it is positive semidefinite,
/// `None` otherwise. Symmetric Gaussian elimination: a zero pivot must come
/// with a zero row, and every pivot must be nonnegative.
#[allow(clippy::needless_range_loop)]
pub(crate) fn semidefinite_rank(s: &RatMatrix) -> Option<usize> {
    let n = s.rows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| s.row(i).to_vec()).collect();
    let mut rank = 0;
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            return None;
        }
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return None;
            }
            continue;
        }
        rank += 1;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    Some(rank)
}
