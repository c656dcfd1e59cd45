//! Integer scalars for the elimination kernels.
//!
//! Every kernel is written once against [`Scalar`] and run first with `i64`
//! (checked arithmetic), then re-run with `BigInt` if any operation
//! overflowed. The `BigInt` implementation never reports overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt::Debug;

/// Marker for an overflowed fixed-width operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) type Checked<T> = Result<T, Overflow>;

pub(crate) trait Scalar: Clone + PartialEq + Debug + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(v: &BigInt) -> Checked<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn sub(&self, o: &Self) -> Checked<Self>;
    fn mul(&self, o: &Self) -> Checked<Self>;
    fn neg(&self) -> Checked<Self>;
    fn abs(&self) -> Checked<Self>;
    /// Floor division.
    fn div_floor(&self, o: &Self) -> Checked<Self>;
    /// Division known to be exact.
    fn div_exact(&self, o: &Self) -> Checked<Self>;
    /// Nonnegative gcd; `gcd(0, 0) = 0`.
    fn gcd(&self, o: &Self) -> Checked<Self>;
    /// Compare absolute values.
    fn abs_lt(&self, o: &Self) -> bool;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(v: &BigInt) -> Checked<Self> {
        // Keep headroom so that negation and abs of any stored value succeed.
        match v.to_i64() {
            Some(x) if x != i64::MIN => Ok(x),
            _ => Err(Overflow),
        }
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn abs(&self) -> Checked<Self> {
        self.checked_abs().ok_or(Overflow)
    }
    fn div_floor(&self, o: &Self) -> Checked<Self> {
        if *o == 0 {
            return Err(Overflow);
        }
        if *self == i64::MIN && *o == -1 {
            return Err(Overflow);
        }
        Ok(Integer::div_floor(self, o))
    }
    fn div_exact(&self, o: &Self) -> Checked<Self> {
        self.checked_div(*o).ok_or(Overflow)
    }
    fn gcd(&self, o: &Self) -> Checked<Self> {
        if *self == i64::MIN || *o == i64::MIN {
            return Err(Overflow);
        }
        Ok(Integer::gcd(self, o))
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn from_big(v: &BigInt) -> Checked<Self> {
        Ok(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn sub(&self, o: &Self) -> Checked<Self> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Checked<Self> {
        Ok(self * o)
    }
    fn neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn abs(&self) -> Checked<Self> {
        Ok(Signed::abs(self))
    }
    fn div_floor(&self, o: &Self) -> Checked<Self> {
        if Zero::is_zero(o) {
            return Err(Overflow);
        }
        Ok(Integer::div_floor(self, o))
    }
    fn div_exact(&self, o: &Self) -> Checked<Self> {
        Ok(self / o)
    }
    fn gcd(&self, o: &Self) -> Checked<Self> {
        Ok(Integer::gcd(self, o))
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
}

/// Divides `row` by the gcd of its entries and returns that gcd.
pub(crate) fn make_primitive<T: Scalar>(row: &mut [T]) -> Checked<T> {
    let mut g = T::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x)?;
        }
    }
    if !g.is_zero() && g != T::one() {
        for x in row.iter_mut() {
            *x = x.div_exact(&g)?;
        }
    }
    Ok(g)
}

/// Flips the sign of `row` so that its first nonzero entry is positive.
pub(crate) fn normalize_sign<T: Scalar>(row: &mut [T]) -> Checked<()> {
    if let Some(first) = row.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in row.iter_mut() {
                *x = x.neg()?;
            }
        }
    }
    Ok(())
}

/// Runs `f` in `i64` arithmetic when every input fits, falling back to `BigInt`.
pub(crate) fn with_escalation<R>(small: impl FnOnce() -> Checked<R>, big: impl FnOnce() -> Checked<R>) -> R {
    match small() {
        Ok(r) => r,
        Err(Overflow) => big().expect("BigInt arithmetic cannot overflow"),
    }
}
