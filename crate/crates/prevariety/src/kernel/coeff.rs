//! Scalar abstraction for the exact linear algebra.
//!
//! Every algorithm in the kernel is written once, generically, and run first
//! over `i128` with overflow-checked operations. Input entries are small in
//! practice and per-row gcd normalization keeps intermediate values small, so
//! the fast path almost always succeeds; any overflow aborts the attempt and
//! the caller retries over `BigInt`, which cannot fail.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Raised by the `i128` instantiation when a product or sum leaves the
/// representable range. Never raised by `BigInt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub type CalcResult<T> = Result<T, Overflow>;

pub trait Coeff: Clone + Ord + std::hash::Hash + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn checked_add(&self, rhs: &Self) -> CalcResult<Self>;
    fn checked_sub(&self, rhs: &Self) -> CalcResult<Self>;
    fn checked_mul(&self, rhs: &Self) -> CalcResult<Self>;
    /// Division known to be exact; callers must guarantee divisibility.
    fn exact_div(&self, rhs: &Self) -> Self;
    /// Nonnegative greatest common divisor.
    fn gcd(&self, rhs: &Self) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn checked_add(&self, rhs: &Self) -> CalcResult<Self> {
        i128::checked_add(*self, *rhs).ok_or(Overflow)
    }
    fn checked_sub(&self, rhs: &Self) -> CalcResult<Self> {
        i128::checked_sub(*self, *rhs).ok_or(Overflow)
    }
    fn checked_mul(&self, rhs: &Self) -> CalcResult<Self> {
        i128::checked_mul(*self, *rhs).ok_or(Overflow)
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        debug_assert!(*rhs != 0 && self % rhs == 0);
        self / rhs
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        i128::try_from(v).ok()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn checked_add(&self, rhs: &Self) -> CalcResult<Self> {
        Ok(self + rhs)
    }
    fn checked_sub(&self, rhs: &Self) -> CalcResult<Self> {
        Ok(self - rhs)
    }
    fn checked_mul(&self, rhs: &Self) -> CalcResult<Self> {
        Ok(self * rhs)
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        debug_assert!(!Zero::is_zero(rhs));
        debug_assert!(Zero::is_zero(&(self % rhs)));
        self / rhs
    }
    fn gcd(&self, rhs: &Self) -> Self {
        Integer::gcd(self, rhs)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Divide a slice by the gcd of its entries, in place. A zero slice is left
/// unchanged. The gcd is positive, so directions are preserved.
pub fn normalize_primitive<C: Coeff>(row: &mut [C]) {
    let mut g = C::zero();
    for v in row.iter() {
        g = g.gcd(v);
        if g == C::one() {
            return;
        }
    }
    if g.is_zero() || g == C::one() {
        return;
    }
    for v in row.iter_mut() {
        *v = v.exact_div(&g);
    }
}

/// Convert a slice of `BigInt` into the scalar type, failing when any entry
/// does not fit.
pub fn slice_from_bigint<C: Coeff>(row: &[BigInt]) -> Option<Vec<C>> {
    row.iter().map(C::from_bigint).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_normalization() {
        let mut row = vec![6i128, -9, 12];
        normalize_primitive(&mut row);
        assert_eq!(row, vec![2, -3, 4]);

        let mut neg = vec![-4i128, -8];
        normalize_primitive(&mut neg);
        assert_eq!(neg, vec![-1, -2]);

        let mut zero = vec![0i128, 0];
        normalize_primitive(&mut zero);
        assert_eq!(zero, vec![0, 0]);
    }

    #[test]
    fn i128_overflow_is_reported() {
        let big = i128::MAX / 2 + 1;
        assert_eq!(Coeff::checked_mul(&big, &2), Err(Overflow));
        assert_eq!(Coeff::checked_add(&big, &big), Err(Overflow));
    }
}
