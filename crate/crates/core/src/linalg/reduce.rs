//! Exact row reduction: rank, reduced echelon form, null spaces and linear
//! solves over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{FloatMatrix, RatMatrix};
use super::rational::Rational;
use super::{eigen, KernelError};

/// `σ_max(M) = sqrt(λ_max(MᵗM))`.
pub fn spectral_norm(m: &FloatMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    // Form the smaller Gram matrix.
    let gram = if m.rows() < m.cols() {
        m.matmul(&m.transpose())
    } else {
        m.transpose().matmul(m)
    }
    .expect("gram dimensions agree");
    let gram = gram.symmetric_part();
    match eigen::symmetric_eigen_interval(&gram) {
        Ok(iv) => iv.hi.max(0.0).sqrt(),
        Err(_) => f64::NAN,
    }
}

/// Exact rank by fraction-free (Bareiss) elimination on integer-scaled rows.
pub fn rank(m: &RatMatrix) -> usize {
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect();

    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in col + 1..cols {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Reduced row echelon form and its pivot columns.
#[allow(clippy::needless_range_loop)]
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Rational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let flat = a.into_iter().flatten().collect();
    (
        RatMatrix::from_vec(rows, cols, flat).expect("shape preserved"),
        pivots,
    )
}

/// Basis of `{x : M x = 0}`.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let cols = m.cols();
    let (reduced, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Solves `M x = b` exactly. Returns `None` when inconsistent; free
/// variables are set to zero.
pub fn solve_exact(m: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, KernelError> {
    if b.len() != m.rows() {
        return Err(KernelError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let cols = m.cols();
    let augmented = RatMatrix::from_fn(m.rows(), cols + 1, |i, j| {
        if j < cols {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (reduced, pivots) = rref(&augmented);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = reduced[(r, cols)].clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::dot;
    use crate::linalg::rational::int;

    fn rat(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn spectral_norm_basics() {
        let shift = FloatMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!((spectral_norm(&shift) - 1.0).abs() < 1e-12);
        let d = FloatMatrix::diagonal(&[7.0, -5.0, 2.0, 6.0, -7.0, -5.0, 1.0]);
        assert!((spectral_norm(&d) - 7.0).abs() < 1e-12);
        let wide = FloatMatrix::from_rows(&[vec![3.0, 4.0, 0.0]]).unwrap();
        assert!((spectral_norm(&wide) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rank(&rat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
        assert_eq!(rank(&rat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&rat(&[&[1, 2], &[2, 4], &[3, 6]])), 1);
        assert_eq!(rank(&rat(&[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4]])), 2);
    }

    #[test]
    fn nullspace_is_orthogonal_to_rows() {
        let m = rat(&[&[7, 1, 3], &[2, 4, -4]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        for i in 0..2 {
            assert!(dot(m.row(i), &ns[0]).is_zero());
        }
    }

    #[test]
    fn solve_exact_consistent_and_not() {
        let m = rat(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = solve_exact(&m, &[int(3), int(1), int(4)]).unwrap().unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve_exact(&m, &[int(3), int(1), int(5)]).unwrap().is_none());
    }
}
