use coapprox_core::linalg::rational::int;
use coapprox_core::linalg::{
    rank, rref, solve_lp, spectral_norm, symmetric_eigen, symmetric_eigen_interval, Constraint, FloatMatrix,
    LpOutcome, RatMatrix, Rational, Relation,
};
use coapprox_core::numerical_range::{numerical_range, real_numerical_range};
use num_traits::Zero;
use proptest::prelude::*;

fn float_matrix(max_n: usize) -> impl Strategy<Value = FloatMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..10.0, n * n)
            .prop_map(move |v| FloatMatrix::from_vec(n, n, v).unwrap())
    })
}

fn rect_matrix() -> impl Strategy<Value = FloatMatrix> {
    (1..=5usize, 1..=5usize).prop_flat_map(|(r, c)| {
        prop::collection::vec(-10.0f64..10.0, r * c)
            .prop_map(move |v| FloatMatrix::from_vec(r, c, v).unwrap())
    })
}

fn int_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c)
            .prop_map(move |v| RatMatrix::from_vec(r, c, v.into_iter().map(int).collect()).unwrap())
    })
}

fn unit(v: &[f64]) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 1e-6).then(|| v.iter().map(|x| x / norm).collect())
}

fn quad(m: &FloatMatrix, x: &[f64]) -> f64 {
    m.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Power iteration on `MᵀM`, written independently of the library solver.
fn power_norm(m: &FloatMatrix) -> f64 {
    let mt = m.transpose();
    let mut x: Vec<f64> = (0..m.cols()).map(|i| 1.0 + 0.37 * i as f64).collect();
    let mut estimate = 0.0;
    for _ in 0..5000 {
        let y = mt.matvec(&m.matvec(&x));
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x = y.iter().map(|v| v / norm).collect();
        let next = norm.sqrt();
        if (next - estimate).abs() <= 1e-15 * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

proptest! {
    #[test]
    fn eigen_interval_is_permutation_invariant(m in float_matrix(6), shift in 0usize..6) {
        let s = m.symmetric_part();
        let n = s.rows();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = FloatMatrix::from_fn(n, n, |i, j| s[(perm[i], perm[j])]);
        let a = symmetric_eigen_interval(&s).unwrap();
        let b = symmetric_eigen_interval(&permuted).unwrap();
        let scale = 1.0 + s.frobenius_norm();
        prop_assert!((a.lo - b.lo).abs() <= 1e-10 * scale);
        prop_assert!((a.hi - b.hi).abs() <= 1e-10 * scale);
    }

    #[test]
    fn trace_lies_between_extreme_eigenvalues(m in float_matrix(6)) {
        let s = m.symmetric_part();
        let n = s.rows() as f64;
        let iv = symmetric_eigen_interval(&s).unwrap();
        let trace: f64 = (0..s.rows()).map(|i| s[(i, i)]).sum();
        let slack = 1e-9 * (1.0 + s.frobenius_norm());
        prop_assert!(n * iv.lo - slack <= trace && trace <= n * iv.hi + slack);
    }

    #[test]
    fn eigenpairs_reconstruct(m in float_matrix(6)) {
        let s = m.symmetric_part();
        let eig = symmetric_eigen(&s).unwrap();
        for k in 0..s.rows() {
            let v = eig.vector(k);
            let sv = s.matvec(&v);
            let err = sv.iter().zip(&v).map(|(a, b)| (a - eig.values[k] * b).abs()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-9 * (1.0 + s.frobenius_norm()));
        }
    }

    #[test]
    fn spectral_norm_is_transpose_invariant_and_bounds_images(
        m in rect_matrix(),
        x in prop::collection::vec(-1.0f64..1.0, 5),
    ) {
        let a = spectral_norm(&m);
        let b = spectral_norm(&m.transpose());
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a));
        let x = &x[..m.cols()];
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(xn > 1e-6);
        let mx = m.matvec(x).iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(a * xn + 1e-10 * (1.0 + a) >= mx);
        prop_assert!(a <= m.frobenius_norm() + 1e-10);
    }

    #[test]
    fn spectral_norm_matches_power_iteration(m in rect_matrix()) {
        let a = spectral_norm(&m);
        let b = power_norm(&m);
        prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a), "{a} vs {b}");
    }

    #[test]
    fn numerical_range_is_transpose_invariant(m in float_matrix(5)) {
        let a = real_numerical_range(&m).unwrap();
        let b = real_numerical_range(&m.transpose()).unwrap();
        let scale = 1.0 + m.frobenius_norm();
        prop_assert!((a.lo - b.lo).abs() <= 1e-10 * scale && (a.hi - b.hi).abs() <= 1e-10 * scale);
    }

    #[test]
    fn unit_vectors_stay_inside_range(m in float_matrix(5), raw in prop::collection::vec(-1.0f64..1.0, 5)) {
        let n = m.rows();
        let x = unit(&raw[..n]);
        prop_assume!(x.is_some());
        let iv = real_numerical_range(&m).unwrap();
        let q = quad(&m, &x.unwrap());
        let slack = 1e-9 * (1.0 + m.frobenius_norm());
        prop_assert!(iv.lo - slack <= q && q <= iv.hi + slack);
    }

    #[test]
    fn range_endpoints_are_attained(m in float_matrix(5)) {
        let eig = symmetric_eigen(&m.symmetric_part()).unwrap();
        let iv = real_numerical_range(&m).unwrap();
        let slack = 1e-9 * (1.0 + m.frobenius_norm());
        prop_assert!((quad(&m, &eig.vector(0)) - iv.lo).abs() <= slack);
        prop_assert!((quad(&m, &eig.vector(m.rows() - 1)) - iv.hi).abs() <= slack);
    }

    #[test]
    fn skew_matrices_have_range_zero(m in float_matrix(5)) {
        let skew = FloatMatrix::from_fn(m.rows(), m.rows(), |i, j| m[(i, j)] - m[(j, i)]);
        let iv = real_numerical_range(&skew).unwrap();
        prop_assert!(iv.lo.abs() <= 1e-12 && iv.hi.abs() <= 1e-12);
    }

    #[test]
    fn certified_endpoints_match_float_endpoints(m in int_matrix(4, 4).prop_filter("square", |m| m.is_square())) {
        let w = numerical_range(&m).unwrap();
        if let Some(exact) = w.exact {
            prop_assert!((coapprox_core::linalg::rational::to_f64(&exact.lo) - w.approx.lo).abs() <= 1e-9);
            prop_assert!((coapprox_core::linalg::rational::to_f64(&exact.hi) - w.approx.hi).abs() <= 1e-9);
        }
    }

    #[test]
    fn rank_counts_rref_pivots(m in int_matrix(5, 5)) {
        let (reduced, pivots) = rref(&m);
        prop_assert_eq!(rank(&m), pivots.len());
        for (row, &col) in pivots.iter().enumerate() {
            prop_assert_eq!(reduced[(row, col)].clone(), int(1));
        }
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn exact_simplex_matches_vertex_enumeration(
        rows in prop::collection::vec((-5i64..=5, -5i64..=5, -10i64..=10), 1..5),
        obj in (-5i64..=5, -5i64..=5),
    ) {
        let mut constraints: Vec<Constraint<Rational>> = rows
            .iter()
            .map(|&(a, b, c)| Constraint::new(vec![int(a), int(b)], Relation::Le, int(c)))
            .collect();
        for k in 0..2 {
            let mut e = vec![int(0), int(0)];
            e[k] = int(1);
            constraints.push(Constraint::new(e.clone(), Relation::Le, int(20)));
            constraints.push(Constraint::new(e, Relation::Ge, int(-20)));
        }
        let objective = vec![int(obj.0), int(obj.1)];
        let outcome = solve_lp(&objective, &constraints).unwrap();

        // Every vertex is the intersection of two tight constraints.
        let lhs = |c: &Constraint<Rational>, x: &[Rational]| &c.coeffs[0] * &x[0] + &c.coeffs[1] * &x[1];
        let feasible = |x: &[Rational]| constraints.iter().all(|c| match c.relation {
            Relation::Le => lhs(c, x) <= c.rhs,
            Relation::Ge => lhs(c, x) >= c.rhs,
            Relation::Eq => lhs(c, x) == c.rhs,
        });
        let mut best: Option<Rational> = None;
        for i in 0..constraints.len() {
            for j in i + 1..constraints.len() {
                let (a, b) = (&constraints[i], &constraints[j]);
                let det = &a.coeffs[0] * &b.coeffs[1] - &a.coeffs[1] * &b.coeffs[0];
                if det.is_zero() {
                    continue;
                }
                let x0 = (&a.rhs * &b.coeffs[1] - &a.coeffs[1] * &b.rhs) / &det;
                let x1 = (&a.coeffs[0] * &b.rhs - &a.rhs * &b.coeffs[0]) / &det;
                let x = [x0, x1];
                if feasible(&x) {
                    let v = &objective[0] * &x[0] + &objective[1] * &x[1];
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
            }
        }
        match (outcome, best) {
            (LpOutcome::Optimal { objective: v, point }, Some(b)) => {
                prop_assert_eq!(v, b);
                prop_assert!(feasible(&point));
            }
            (LpOutcome::Infeasible, None) => {}
            (other, b) => prop_assert!(false, "simplex {:?} vs enumeration {:?}", other.status(), b),
        }
    }
}

#[test]
fn power_iteration_reference_value() {
    let m = FloatMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    assert!((power_norm(&m) - 5.464985704219043).abs() < 1e-12);
    assert!((spectral_norm(&m) - 5.464985704219043).abs() < 1e-12);
}
