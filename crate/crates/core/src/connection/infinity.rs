use std::fmt;

use num_traits::One;

use super::{ExponentialFactor, FACTOR_VAR};
use crate::error::{Error, Result};
use crate::scalar::Cyclotomic;
use crate::series::Exponent;
use crate::Series;

/// The connection `d/dx + F(x)/x` near `x = ∞`.
///
/// Series truncate upwards, so `F` is stored as `g(ζ) = F(1/ζ)`; an unknown
/// tail `O(ζ^T)` in `g` means every term of `F` below `x^{-T}` is unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionAtInfinity {
    var: char,
    g: Series,
}

impl ConnectionAtInfinity {
    /// From `g(ζ) = F(1/ζ)`.
    pub fn from_zeta(x: char, g: Series) -> Self {
        ConnectionAtInfinity {
            var: x,
            g: g.with_var(FACTOR_VAR),
        }
    }

    /// From an exact Laurent–Puiseux polynomial `F` in `x`.
    pub fn from_f(f: &Series) -> Result<Self> {
        if !f.is_exact() {
            return Err(Error::Invalid(
                "F must be given exactly; truncated inputs go through from_zeta".into(),
            ));
        }
        let g = Series::from_terms(
            FACTOR_VAR,
            f.ramification(),
            f.terms().map(|(k, c)| (-k, c.clone())),
            None,
        );
        Ok(Self::from_zeta(f.var(), g))
    }

    /// From an exact `F(x)/x`.
    pub fn from_f_over_x(h: &Series) -> Result<Self> {
        Self::from_f(&h.shift(Exponent::one()))
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn ramification(&self) -> u32 {
        self.g.ramification()
    }

    /// `g(ζ) = F(1/ζ)`.
    pub fn zeta_series(&self) -> &Series {
        &self.g
    }

    /// Coefficient of `x^e` in `F`, `None` when not determined.
    pub fn f_coefficient(&self, e: Exponent) -> Option<Cyclotomic> {
        self.g.is_known_at(-e).then(|| self.g.coeff(-e))
    }

    /// Coefficient of `x^e` in `F/x`.
    pub fn f_over_x_coefficient(&self, e: Exponent) -> Option<Cyclotomic> {
        self.f_coefficient(e + Exponent::one())
    }

    /// Known terms of `F/x`, highest exponent first, as `(exponent, coeff)`.
    pub fn f_over_x_terms(&self) -> Vec<(Exponent, Cyclotomic)> {
        self.g
            .exponent_terms()
            .map(|(k, c)| (-k - Exponent::one(), c.clone()))
            .collect()
    }

    /// Every `x^e` with `e` at or below this in `F/x` is undetermined.
    pub fn f_over_x_unknown_from(&self) -> Option<Exponent> {
        self.g.truncation().map(|t| -t - Exponent::one())
    }

    /// The class `E_{-g, r}`, canonicalized.
    pub fn to_factor(&self) -> Result<ExponentialFactor> {
        ExponentialFactor::from_series(self.g.neg()).canonicalize()
    }

    /// `F/x` as an exact series in `x`, dropping any unknown tail.
    pub fn f_over_x_series(&self) -> Series {
        let r = self.g.ramification() as i64;
        Series::from_terms(
            self.var,
            self.g.ramification(),
            self.g.terms().map(|(k, c)| (-k - r, c.clone())),
            None,
        )
    }
}

impl fmt::Display for ConnectionAtInfinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F/{} = {}", self.var, self.f_over_x_series())?;
        if let Some(t) = self.f_over_x_unknown_from() {
            let tail = Series::monomial(self.var, Cyclotomic::one(), t);
            write!(f, " + O({tail})")?;
        }
        Ok(())
    }
}

impl Default for ConnectionAtInfinity {
    fn default() -> Self {
        ConnectionAtInfinity {
            var: 'x',
            g: Series::zero(FACTOR_VAR),
        }
    }
}
