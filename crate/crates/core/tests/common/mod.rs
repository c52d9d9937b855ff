#![allow(dead_code)]

use coapprox_core::linalg::rational::int;
use coapprox_core::linalg::{RatMatrix, Rational};
use coapprox_core::Basis;

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// A_1, A_2, A_3 in D_7 from the worked example.
pub fn example_basis() -> Basis {
    Basis::from_diagonals(vec![
        ints(&[7, -5, 2, 6, -7, -5, 1]),
        ints(&[1, 3, 4, 3, -1, 3, 2]),
        ints(&[3, -7, -4, 5, -3, -7, -2]),
    ])
    .unwrap()
}

/// 7×7 target from 1-based `(i, j, value)` entries; everything else is
/// `fill(i, j)`.
pub fn target(entries: &[(usize, usize, i64)], fill: impl Fn(usize, usize) -> i64) -> RatMatrix {
    let mut t = RatMatrix::from_fn(7, 7, |i, j| int(fill(i, j)));
    for &(i, j, v) in entries {
        t[(i - 1, j - 1)] = int(v);
    }
    t
}

#[rustfmt::skip]
pub const T1: [(usize, usize, i64); 10] = [
    (1, 1, 2), (1, 5, 4), (2, 2, 1), (2, 6, 3), (3, 3, 4),
    (4, 4, 1), (5, 1, -7), (5, 5, -2), (6, 2, 2), (6, 6, 1),
];
#[rustfmt::skip]
pub const T2: [(usize, usize, i64); 10] = [
    (1, 1, 3), (1, 5, -5), (2, 2, 1), (2, 6, 3), (3, 3, 4),
    (4, 4, 1), (5, 1, -5), (5, 5, -3), (6, 2, 2), (6, 6, 1),
];
#[rustfmt::skip]
pub const T3: [(usize, usize, i64); 10] = [
    (1, 1, 14), (1, 5, 1), (2, 2, 1), (2, 6, 3), (3, 3, 4),
    (4, 4, 1), (5, 1, 1), (5, 5, -14), (6, 2, 2), (6, 6, 1),
];

pub fn t1() -> RatMatrix {
    target(&T1, |_, _| 0)
}

pub fn t2() -> RatMatrix {
    target(&T2, |_, _| 0)
}

pub fn t3() -> RatMatrix {
    target(&T3, |_, _| 0)
}

pub fn y1() -> Vec<Vec<Rational>> {
    vec![
        ints(&[6, 1, 4, 3, 3, 1, 1]),
        ints(&[2, 5, 2, 3, 1, 5, 1]),
        ints(&[4, 3, 8, 6, 2, 3, 2]),
        ints(&[2, 1, 4, 9, 1, 1, 3]),
    ]
}

pub fn y2() -> Vec<Vec<Rational>> {
    vec![ints(&[2, -5, 3, 1, -2, -5, 2]), ints(&[-4, 2, 2, -2, -4, 2, -4])]
}
