//! Exact coefficient fields.
//!
//! Series and operators are generic over [`Field`]. Two implementations are
//! provided: plain rationals and elements of cyclotomic fields `Q(μ_N)`.
//! Roots of leading coefficients are only taken when the result stays in one
//! of these fields.

mod cyclotomic;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use rational::{rational_nth_root, Rational};

/// An exact field of characteristic zero.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn from_rational(q: Rational) -> Self;

    /// The value as a rational number, if it is one.
    fn as_rational(&self) -> Option<Rational>;

    /// The principal `n`-th root (argument in `[0, 2π/n)`), when it lies in
    /// the field this type can represent.
    fn principal_root(&self, n: u32) -> Result<Self>;

    /// A normal form suitable for printing and ordering.
    fn normalized(&self) -> Self {
        self.clone()
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.clone() * inv)
    }

    /// Integer power; negative exponents invert.
    fn powi(&self, n: i64) -> Option<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }
}
