use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use super::Field;
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Exact `n`-th root of a non-negative rational, if it is a perfect power.
pub fn rational_nth_root(q: &Rational, n: u32) -> Option<Rational> {
    if q.is_negative() || n == 0 {
        return None;
    }
    let root_int = |v: &BigInt| -> Option<BigInt> {
        let r = v.nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == *v).then_some(r)
    };
    let num = root_int(q.numer())?;
    let den = root_int(q.denom())?;
    Some(Rational::new(num, den))
}

impl Field for Rational {
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn principal_root(&self, n: u32) -> Result<Self> {
        if n == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        if self.numer().sign() == Sign::Minus {
            return Err(Error::RootNotInField(format!(
                "principal {n}-th root of {self} is not rational"
            )));
        }
        rational_nth_root(self, n)
            .ok_or_else(|| Error::RootNotInField(format!("{self} is not a perfect {n}-th power")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(rational_nth_root(&q(8, 27), 3), Some(q(2, 3)));
        assert_eq!(rational_nth_root(&q(2, 1), 2), None);
        assert_eq!(q(1, 4).principal_root(2).unwrap(), q(1, 2));
        assert!(q(-1, 1).principal_root(3).is_err());
        assert_eq!(q(-5, 1).principal_root(1).unwrap(), q(-5, 1));
        assert!(Rational::one().powi(-3).unwrap().is_one());
    }
}
