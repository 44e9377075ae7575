//! Rank-one exponential classes `E_{f,r}` and formal sums of them.
//!
//! `E_{f,r}` is the connection `d/dζ + f/ζ` over `C((ζ^{1/r}))`, pushed down
//! to `C((ζ))`. Its class only depends on `f` modulo `ζ^{1/r}C[[ζ^{1/r}]]`,
//! modulo `(1/r)Z` in the constant term, and up to the twists
//! `ζ^{1/r} ↦ μ_r^k ζ^{1/r}`.

mod infinity;
mod json;
mod object;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Cyclotomic, Field, Rational};
use crate::series::Exponent;
use crate::Series;

pub use infinity::ConnectionAtInfinity;
pub use json::{CoeffJson, ConnectionJson, FactorJson, ObjectJson, TermJson};
pub use object::{LTComponent, LTObject};

/// Variable used for canonical factors.
pub const FACTOR_VAR: char = 'ζ';

/// A rank-one exponential factor `E_{f,r}` with `r` the declared
/// ramification of `f`.
#[derive(Clone, Debug)]
pub struct ExponentialFactor {
    f: Series,
}

impl PartialEq for ExponentialFactor {
    /// Same exponent and same declared ramification.
    fn eq(&self, other: &Self) -> bool {
        self.f.ramification() == other.f.ramification() && self.f == other.f
    }
}

impl ExponentialFactor {
    /// Wrap a series as is; call [`canonicalize`](Self::canonicalize) for the
    /// normal form.
    pub fn from_series(f: Series) -> Self {
        ExponentialFactor { f }
    }

    /// Canonical factor of `f`.
    pub fn new(f: Series) -> Result<Self> {
        Self::from_series(f).canonicalize()
    }

    /// The regular class `E_{0,1}`.
    pub fn zero() -> Self {
        ExponentialFactor {
            f: Series::zero(FACTOR_VAR),
        }
    }

    pub fn series(&self) -> &Series {
        &self.f
    }

    pub fn ramification(&self) -> u32 {
        self.f.ramification()
    }

    /// Drop positive exponents, minimize the ramification, then move the
    /// constant term into `[0, 1/r)`.
    pub fn canonicalize(&self) -> Result<Self> {
        if self.f.truncation().is_some_and(|t| t <= Exponent::zero()) {
            return Err(Error::PrecisionExhausted(format!(
                "exponent factor {} is not determined up to the constant term",
                self.f
            )));
        }
        let principal = self
            .f
            .principal_part(Exponent::zero())
            .reduce_ramification();
        let r = principal.ramification() as i64;
        let c = principal.coeff(Exponent::zero()).normalized();
        let shift = {
            let c0 = c.coeffs()[0].clone() * Rational::from_integer(r.into());
            Rational::new(c0.floor().to_integer(), r.into())
        };
        let reduced = Series::constant(principal.var(), Cyclotomic::rational(-shift));
        let f = principal.add(&reduced)?.with_ramification(r as u32);
        let f = Series::from_terms(
            FACTOR_VAR,
            f.ramification(),
            f.terms().map(|(k, c)| (k, c.normalized())),
            None,
        );
        Ok(ExponentialFactor { f })
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize()
            .is_ok_and(|c| c.f.ramification() == self.f.ramification() && c == *self)
    }

    /// `max(0, -ord f)`.
    pub fn slope(&self) -> Exponent {
        match self.f.principal_part(Exponent::zero()).order() {
            Ok(Some(o)) if o < Exponent::zero() => -o,
            _ => Exponent::zero(),
        }
    }

    /// `r · slope`, an integer for canonical factors.
    pub fn irregularity(&self) -> Exponent {
        self.slope() * Exponent::from(self.ramification() as i64)
    }

    /// Whether the declared ramification is already minimal.
    pub fn is_irreducible(&self) -> bool {
        self.f.reduce_ramification().ramification() == self.f.ramification()
    }

    /// `E_{f(μ_r^k ζ)}`, canonicalized.
    pub fn twist(&self, k: i64) -> Result<Self> {
        Self::from_series(self.f.twist(k)).canonicalize()
    }

    /// Twist index `k` with `twist(self, k) ≅ other`, or `None` when the
    /// classes differ (including different ramifications).
    pub fn iso_equal(&self, other: &Self) -> Result<Option<u32>> {
        let a = self.canonicalize()?;
        let b = other.canonicalize()?;
        if a.ramification() != b.ramification() {
            return Ok(None);
        }
        for k in 0..a.ramification() {
            if a.twist(k as i64)? == b {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Rank-one tensor product: exponents add.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let sum = self.f.add(&other.f.clone().with_var(self.f.var()))?;
        Self::from_series(sum).canonicalize()
    }

    /// The `r` scalar exponents `f(μ_r^k ζ)`.
    pub fn galois_orbit(&self) -> Result<Vec<Series>> {
        if !self.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        Ok((0..self.ramification() as i64)
            .map(|k| self.f.twist(k))
            .collect())
    }

    /// Canonical factor whose orbit is `entries` up to equivalence.
    pub fn orbit_collect(entries: &[Series]) -> Result<Self> {
        let canon: Vec<ExponentialFactor> = entries
            .iter()
            .map(|e| ExponentialFactor::new(e.clone()))
            .collect::<Result<_>>()?;
        let n = entries.len();
        if n == 0 || canon.iter().any(|c| c.ramification() as usize != n) {
            return Err(Error::NotAnOrbit);
        }
        let orbit = canon[0].twists()?;
        if !same_multiset(&orbit, &canon) {
            return Err(Error::NotAnOrbit);
        }
        Ok(preferred(orbit))
    }

    /// All `r` canonical twists, in twist order.
    fn twists(&self) -> Result<Vec<Self>> {
        (0..self.ramification() as i64)
            .map(|k| self.twist(k))
            .collect()
    }

    /// A representative of the class that does not depend on which twist
    /// was given.
    pub fn representative(&self) -> Result<Self> {
        Ok(preferred(self.canonicalize()?.twists()?))
    }

    fn sort_key(&self) -> (Exponent, u32, String) {
        (self.slope(), self.ramification(), self.f.to_string())
    }
}

/// The twist whose leading coefficient lives in the smallest cyclotomic
/// field, ties broken by text.
fn preferred(orbit: Vec<ExponentialFactor>) -> ExponentialFactor {
    orbit
        .into_iter()
        .min_by_key(|e| {
            let order =
                e.f.leading_coefficient()
                    .map_or(1, |c| c.simplify().order());
            (order, e.f.to_string())
        })
        .expect("orbits are nonempty")
}

fn same_multiset(a: &[ExponentialFactor], b: &[ExponentialFactor]) -> bool {
    let mut used = vec![false; b.len()];
    a.len() == b.len()
        && a.iter()
            .all(|x| match (0..b.len()).find(|&j| !used[j] && b[j] == *x) {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            })
}

/// Group scalar exponents into twist orbits, one component per orbit.
pub fn decompose_entries(entries: &[Series]) -> Result<LTObject> {
    let mut remaining: Vec<ExponentialFactor> = entries
        .iter()
        .map(|e| ExponentialFactor::new(e.clone()))
        .collect::<Result<_>>()?;
    let mut components = Vec::new();
    while let Some(first) = remaining.first().cloned() {
        let orbit = first.twists()?;
        for member in &orbit {
            match remaining.iter().position(|e| e == member) {
                Some(i) => {
                    remaining.remove(i);
                }
                None => return Err(Error::NotAnOrbit),
            }
        }
        components.push(LTComponent::new(preferred(orbit), 1)?);
    }
    Ok(LTObject::new(components))
}

impl fmt::Display for ExponentialFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{}, {}]", self.f, self.ramification())
    }
}

impl One for ExponentialFactor {
    fn one() -> Self {
        ExponentialFactor::zero()
    }
}

impl std::ops::Mul for ExponentialFactor {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.tensor(&rhs).expect("canonical factors tensor")
    }
}
