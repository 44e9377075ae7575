use std::fmt;

use super::{Exponent, PuiseuxSeries};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// An exact polynomial: a series with ramification one, no truncation and
/// no negative exponents.
#[derive(Clone, Debug)]
pub struct Poly<K>(PuiseuxSeries<K>);

impl<K: Field> Poly<K> {
    pub fn new(series: PuiseuxSeries<K>) -> Result<Self> {
        if !series.is_exact() {
            return Err(Error::Invalid(
                "a polynomial cannot carry a truncation".into(),
            ));
        }
        let s = series.reduce_ramification();
        if s.ramification() != 1 {
            return Err(Error::Invalid(format!("{s} has fractional exponents")));
        }
        if s.terms().any(|(k, _)| k < 0) {
            return Err(Error::Invalid(format!("{s} has negative exponents")));
        }
        Ok(Poly(s))
    }

    /// `Σ c_i var^i` from ascending coefficients.
    pub fn from_coeffs(var: char, coeffs: &[K]) -> Self {
        Poly(PuiseuxSeries::from_terms(
            var,
            1,
            coeffs
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, c)| (i as i64, c)),
            None,
        ))
    }

    /// `c · var^n`.
    pub fn monomial(var: char, c: K, n: u32) -> Self {
        Poly(PuiseuxSeries::monomial(var, c, Exponent::from(n as i64)))
    }

    pub fn var(&self) -> char {
        self.0.var()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_exact_zero()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.0.terms().next_back().map(|(k, _)| k as u32)
    }

    pub fn leading_coefficient(&self) -> Option<&K> {
        self.0.terms().next_back().map(|(_, c)| c)
    }

    pub fn coeff(&self, i: u32) -> K {
        self.0.coeff_at(i as i64)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.0.num_terms() == 1
    }

    pub fn derivative(&self) -> Self {
        Poly(self.0.derivative())
    }

    pub fn as_series(&self) -> &PuiseuxSeries<K> {
        &self.0
    }

    pub fn into_series(self) -> PuiseuxSeries<K> {
        self.0
    }
}

impl<K: Field> PartialEq for Poly<K> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
