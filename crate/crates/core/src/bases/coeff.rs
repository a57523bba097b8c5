//! Coefficient rings for the combinatorial kernels.
//!
//! Completion and fiber enumeration run first over checked `i64`; any
//! overflow aborts the attempt and the caller reruns over `BigInt`. Results
//! are identical either way, only the speed differs.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Why a generic kernel stopped early.
#[derive(Debug)]
pub(crate) enum Halt {
    /// Fixed-width arithmetic overflowed; retry with big integers.
    Overflow,
    Fail(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Fail(e)
    }
}

pub(crate) type Step<T> = std::result::Result<T, Halt>;

pub(crate) trait Coeff: Clone + Ord + Hash + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_big(x: &BigInt) -> Step<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Step<Self>;
    fn sub(&self, o: &Self) -> Step<Self>;
    fn mul(&self, o: &Self) -> Step<Self>;
    /// Floor division by a positive divisor.
    fn div_floor(&self, d: &Self) -> Self;
    fn neg(&self) -> Step<Self>;
    fn is_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs(&self) -> Step<Self> {
        if self.is_neg() {
            self.neg()
        } else {
            Ok(self.clone())
        }
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn from_big(x: &BigInt) -> Step<Self> {
        x.to_i64().ok_or(Halt::Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Step<Self> {
        self.checked_add(*o).ok_or(Halt::Overflow)
    }
    fn sub(&self, o: &Self) -> Step<Self> {
        self.checked_sub(*o).ok_or(Halt::Overflow)
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        self.checked_mul(*o).ok_or(Halt::Overflow)
    }
    fn div_floor(&self, d: &Self) -> Self {
        self.div_euclid(*d)
    }
    fn neg(&self) -> Step<Self> {
        self.checked_neg().ok_or(Halt::Overflow)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(x: &BigInt) -> Step<Self> {
        Ok(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Step<Self> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Step<Self> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Step<Self> {
        Ok(self * o)
    }
    fn div_floor(&self, d: &Self) -> Self {
        num_integer::Integer::div_floor(self, d)
    }
    fn neg(&self) -> Step<Self> {
        Ok(-self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Runs `job` over `i64`, falling back to `BigInt` on overflow.
pub(crate) fn with_fallback<R>(
    fast: impl FnOnce() -> Step<R>,
    exact: impl FnOnce() -> Step<R>,
) -> Result<R> {
    match fast() {
        Ok(r) => Ok(r),
        Err(Halt::Fail(e)) => Err(e),
        Err(Halt::Overflow) => match exact() {
            Ok(r) => Ok(r),
            Err(Halt::Fail(e)) => Err(e),
            Err(Halt::Overflow) => unreachable!("big integers do not overflow"),
        },
    }
}

pub(crate) fn vec_from_big<T: Coeff>(v: &[BigInt]) -> Step<Vec<T>> {
    v.iter().map(T::from_big).collect()
}

pub(crate) fn vec_to_big<T: Coeff>(v: &[T]) -> Vec<BigInt> {
    v.iter().map(Coeff::to_big).collect()
}

/// Dense matrix rows over `T`.
pub(crate) fn rows_from_big<T: Coeff>(a: &crate::intlin::IntMatrix) -> Step<Vec<Vec<T>>> {
    (0..a.rows()).map(|i| vec_from_big(a.row(i))).collect()
}

pub(crate) fn dot<T: Coeff>(a: &[T], b: &[T]) -> Step<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y)?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_is_reported_not_wrapped() {
        assert!(matches!(i64::MAX.add(&1), Err(Halt::Overflow)));
        assert!(matches!(i64::MIN.neg(), Err(Halt::Overflow)));
        let big = BigInt::from(i64::MAX) + 1;
        assert!(matches!(
            <i64 as Coeff>::from_big(&big),
            Err(Halt::Overflow)
        ));
        assert_eq!(
            <BigInt as Coeff>::add(&big, &BigInt::from(1)).unwrap(),
            big + 1
        );
    }

    #[test]
    fn fallback_reruns_exactly() {
        let r: Result<i32> = with_fallback(|| Err(Halt::Overflow), || Ok(7));
        assert_eq!(r.unwrap(), 7);
        let r: Result<i32> = with_fallback(|| Err(Halt::Fail(Error::Domain("x".into()))), || Ok(7));
        assert!(r.is_err());
    }

    #[test]
    fn floor_division() {
        assert_eq!(Coeff::div_floor(&-7i64, &2), -4);
        assert_eq!(
            Coeff::div_floor(&BigInt::from(-7), &BigInt::from(2)),
            BigInt::from(-4)
        );
    }
}
