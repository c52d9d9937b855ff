//! Machine-word rationals for the exact simplex. Arithmetic is checked; an
//! overflow raises a thread-local flag and the caller redoes the work with
//! big rationals.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Num, One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

thread_local! {
    static OVERFLOWED: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` and reports whether any [`SmallRational`] operation overflowed.
pub(crate) fn tracking_overflow<R>(f: impl FnOnce() -> R) -> (R, bool) {
    let outer = OVERFLOWED.with(|o| o.replace(false));
    let result = f();
    let overflowed = OVERFLOWED.with(|o| o.replace(outer));
    (result, overflowed)
}

fn overflow() -> SmallRational {
    OVERFLOWED.with(|o| o.set(true));
    SmallRational(Ratio::zero())
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct SmallRational(pub Ratio<i64>);

impl SmallRational {
    pub fn from_big(r: &Rational) -> Option<Self> {
        Some(Self(Ratio::new_raw(r.numer().to_i64()?, r.denom().to_i64()?)))
    }

    pub fn to_big(&self) -> Rational {
        Rational::new_raw(BigInt::from(*self.0.numer()), BigInt::from(*self.0.denom()))
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl fmt::Debug for SmallRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! checked_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for SmallRational {
            type Output = Self;

            fn $method(self, rhs: Self) -> Self {
                self.0.$checked(&rhs.0).map(Self).unwrap_or_else(overflow)
            }
        }

        impl<'a> $tr<&'a SmallRational> for &'a SmallRational {
            type Output = SmallRational;

            fn $method(self, rhs: Self) -> SmallRational {
                self.0
                    .$checked(&rhs.0)
                    .map(SmallRational)
                    .unwrap_or_else(overflow)
            }
        }
    };
}

checked_op!(Add, add, checked_add);
checked_op!(Sub, sub, checked_sub);
checked_op!(Mul, mul, checked_mul);
checked_op!(Div, div, checked_div);

impl Rem for SmallRational {
    type Output = Self;

    fn rem(self, _: Self) -> Self {
        // Never needed by the simplex; force the big-rational path.
        overflow()
    }
}

impl Neg for SmallRational {
    type Output = Self;

    fn neg(self) -> Self {
        match self.0.numer().checked_neg() {
            Some(n) => Self(Ratio::new_raw(n, *self.0.denom())),
            None => overflow(),
        }
    }
}

impl Zero for SmallRational {
    fn zero() -> Self {
        Self(Ratio::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for SmallRational {
    fn one() -> Self {
        Self(Ratio::one())
    }
}

impl Num for SmallRational {
    type FromStrRadixErr = num_rational::ParseRatioError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        Ratio::from_str_radix(s, radix).map(Self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::ratio;

    #[test]
    fn round_trips_and_computes_exactly() {
        let a = SmallRational::from_big(&ratio(3, 7)).unwrap();
        let b = SmallRational::from_big(&ratio(-5, 2)).unwrap();
        let (sum, overflowed) = tracking_overflow(|| a.clone() + b.clone());
        assert!(!overflowed);
        assert_eq!(sum.to_big(), ratio(3, 7) + ratio(-5, 2));
        assert_eq!((&a / &b).to_big(), ratio(-6, 35));
    }

    #[test]
    fn overflow_is_flagged() {
        let big = SmallRational(Ratio::from_integer(i64::MAX / 2));
        let (_, overflowed) = tracking_overflow(|| big.clone() * big.clone());
        assert!(overflowed);
        let (_, clean) = tracking_overflow(|| big.clone() - big.clone());
        assert!(!clean);
    }
}
