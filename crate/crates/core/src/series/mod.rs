//! Truncated Puiseux series with exact coefficients.
//!
//! A series in the variable `ζ` with ramification `r` stores a finite map from
//! integer numerators `k` (meaning the exponent `k/r`) to nonzero
//! coefficients, plus a truncation numerator `T`: every exponent `>= T/r` is
//! unknown. An empty map with `T = +∞` is the exact zero series; an empty map
//! with finite `T` carries no information beyond "zero below `T/r`".

mod compose;
mod poly;
mod text;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Cyclotomic, Field};

pub use compose::{comp_inverse, CompInverse};
pub use poly::Poly;
pub use text::{parse_poly, parse_series, ParsedSeries, GRAMMAR};

/// Exponents are small rationals.
pub type Exponent = Ratio<i64>;

#[derive(Clone, Debug)]
pub struct PuiseuxSeries<K> {
    var: char,
    ram: u32,
    terms: BTreeMap<i64, K>,
    trunc: Option<i64>,
}

impl<K: Field> PuiseuxSeries<K> {
    /// The exact zero series.
    pub fn zero(var: char) -> Self {
        PuiseuxSeries {
            var,
            ram: 1,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    /// A series with no known terms below `trunc/ram`.
    pub fn unknown(var: char, ram: u32, trunc: i64) -> Self {
        PuiseuxSeries {
            var,
            ram: ram.max(1),
            terms: BTreeMap::new(),
            trunc: Some(trunc),
        }
    }

    pub fn constant(var: char, c: K) -> Self {
        Self::monomial(var, c, Exponent::zero())
    }

    pub fn monomial(var: char, c: K, exp: Exponent) -> Self {
        let ram = *exp.denom() as u32;
        Self::from_terms(var, ram, [(*exp.numer(), c)], None)
    }

    /// The series `var` itself.
    pub fn variable(var: char) -> Self {
        Self::monomial(var, K::one(), Exponent::one())
    }

    /// Build from numerator/coefficient pairs; zero coefficients and terms at
    /// or beyond the truncation are dropped, repeated numerators are summed.
    pub fn from_terms<I>(var: char, ram: u32, terms: I, trunc: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, K)>,
    {
        assert!(ram >= 1, "ramification must be positive");
        let mut map: BTreeMap<i64, K> = BTreeMap::new();
        for (k, c) in terms {
            if trunc.is_some_and(|t| k >= t) {
                continue;
            }
            match map.remove(&k) {
                Some(prev) => {
                    let s = prev + c;
                    if !s.is_zero() {
                        map.insert(k, s);
                    }
                }
                None => {
                    if !c.is_zero() {
                        map.insert(k, c);
                    }
                }
            }
        }
        PuiseuxSeries {
            var,
            ram,
            terms: map,
            trunc,
        }
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn ramification(&self) -> u32 {
        self.ram
    }

    /// Known terms as (numerator over the ramification, coefficient), ascending.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &K)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Known terms as (exponent, coefficient), ascending.
    pub fn exponent_terms(&self) -> impl DoubleEndedIterator<Item = (Exponent, &K)> + '_ {
        let r = self.ram as i64;
        self.terms
            .iter()
            .map(move |(k, c)| (Exponent::new(*k, r), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Truncation numerator; `None` is `+∞`.
    pub fn truncation_numerator(&self) -> Option<i64> {
        self.trunc
    }

    /// Truncation exponent; `None` is `+∞`.
    pub fn truncation(&self) -> Option<Exponent> {
        self.trunc.map(|t| Exponent::new(t, self.ram as i64))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.trunc.is_none() && self.terms.is_empty()
    }

    /// Exact with a single term.
    pub fn is_exact_monomial(&self) -> bool {
        self.trunc.is_none() && self.terms.len() == 1
    }

    /// Coefficient at an exponent; zero when absent (check the truncation
    /// before trusting a zero).
    pub fn coeff(&self, exp: Exponent) -> K {
        let scaled = exp * Exponent::from(self.ram as i64);
        if !scaled.is_integer() {
            return K::zero();
        }
        self.terms
            .get(&scaled.to_integer())
            .cloned()
            .unwrap_or_else(K::zero)
    }

    pub fn coeff_at(&self, k: i64) -> K {
        self.terms.get(&k).cloned().unwrap_or_else(K::zero)
    }

    /// Whether the coefficient at `exp` is determined.
    pub fn is_known_at(&self, exp: Exponent) -> bool {
        self.truncation().is_none_or(|t| exp < t)
    }

    /// Least exponent with nonzero coefficient; `Ok(None)` is `+∞` (exact zero).
    pub fn order(&self) -> Result<Option<Exponent>> {
        match (self.terms.keys().next(), self.trunc) {
            (Some(&k), _) => Ok(Some(Exponent::new(k, self.ram as i64))),
            (None, None) => Ok(None),
            (None, Some(_)) => Err(Error::UnknownOrder),
        }
    }

    /// Order numerator over the series' own ramification.
    fn order_numerator(&self) -> Result<Option<i64>> {
        match (self.terms.keys().next(), self.trunc) {
            (Some(&k), _) => Ok(Some(k)),
            (None, None) => Ok(None),
            (None, Some(_)) => Err(Error::UnknownOrder),
        }
    }

    /// Lower bound for the order: the order if known, else the truncation.
    fn order_bound(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.trunc)
    }

    pub fn leading(&self) -> Option<(Exponent, &K)> {
        self.exponent_terms().next()
    }

    pub fn leading_coefficient(&self) -> Option<&K> {
        self.terms.values().next()
    }

    pub fn with_var(mut self, var: char) -> Self {
        self.var = var;
        self
    }

    /// Present with ramification `r`, a multiple of the current one.
    pub fn with_ramification(&self, r: u32) -> Self {
        assert!(
            r.is_multiple_of(self.ram),
            "ramification {} does not divide {}",
            self.ram,
            r
        );
        let f = (r / self.ram) as i64;
        PuiseuxSeries {
            var: self.var,
            ram: r,
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            trunc: self.trunc.map(|t| t * f),
        }
    }

    /// Drop terms at exponents `>= t`, lowering the truncation to `t`.
    pub fn truncated(&self, t: Exponent) -> Self {
        let r = self.ram.lcm(&(*t.denom() as u32));
        let s = self.with_ramification(r);
        let tn = (t * Exponent::from(r as i64)).to_integer();
        let trunc = Some(s.trunc.map_or(tn, |old| old.min(tn)));
        PuiseuxSeries {
            var: s.var,
            ram: r,
            terms: s.terms.into_iter().filter(|(k, _)| *k < tn).collect(),
            trunc,
        }
        .reduce_to(self.ram)
    }

    /// Lower the declared ramification back to `r` when every exponent,
    /// including the truncation, allows it.
    fn reduce_to(self, r: u32) -> Self {
        if self.ram == r || !self.ram.is_multiple_of(r) {
            return self;
        }
        let f = (self.ram / r) as i64;
        if self.terms.keys().all(|k| k % f == 0) && self.trunc.is_none_or(|t| t % f == 0) {
            PuiseuxSeries {
                var: self.var,
                ram: r,
                terms: self.terms.into_iter().map(|(k, c)| (k / f, c)).collect(),
                trunc: self.trunc.map(|t| t / f),
            }
        } else {
            self
        }
    }

    /// Minimal ramification dividing the current one that holds every known
    /// exponent. A truncation that falls between the coarser exponents is
    /// rounded down.
    pub fn reduce_ramification(&self) -> Self {
        let mut g = self.ram as i64;
        for k in self.terms.keys() {
            g = g.gcd(k);
        }
        if g == 1 {
            return self.clone();
        }
        PuiseuxSeries {
            var: self.var,
            ram: (self.ram as i64 / g) as u32,
            terms: self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect(),
            trunc: self.trunc.map(|t| Integer::div_floor(&t, &g)),
        }
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch(self.var, other.var));
        }
        Ok(())
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let r = self.ram.lcm(&other.ram);
        (self.with_ramification(r), other.with_ramification(r))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let (a, b) = self.common(other);
        let trunc = min_trunc(a.trunc, b.trunc);
        let terms = a.terms.into_iter().chain(b.terms);
        Ok(Self::from_terms(a.var, a.ram, terms, trunc))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            var: self.var,
            ram: self.ram,
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_terms(
            self.var,
            self.ram,
            self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())),
            self.trunc,
        )
    }

    /// Multiply by `var^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        let r = self.ram.lcm(&(*e.denom() as u32));
        let s = self.with_ramification(r);
        let d = (e * Exponent::from(r as i64)).to_integer();
        PuiseuxSeries {
            var: s.var,
            ram: r,
            terms: s.terms.into_iter().map(|(k, c)| (k + d, c)).collect(),
            trunc: s.trunc.map(|t| t + d),
        }
    }

    /// Product; the result is known up to `min(T_a + ord b, T_b + ord a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(self.var));
        }
        let (a, b) = self.common(other);
        let trunc = match (a.trunc, b.trunc) {
            (None, None) => None,
            (Some(ta), None) => Some(ta + b.order_bound().expect("nonzero")),
            (None, Some(tb)) => Some(tb + a.order_bound().expect("nonzero")),
            (Some(ta), Some(tb)) => {
                Some((ta + b.order_bound().unwrap()).min(tb + a.order_bound().unwrap()))
            }
        };
        let mut out: BTreeMap<i64, K> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let k = ka + kb;
                if trunc.is_some_and(|t| k >= t) {
                    break;
                }
                let p = ca.clone() * cb.clone();
                match out.get_mut(&k) {
                    Some(v) => *v = v.clone() + p,
                    None => {
                        out.insert(k, p);
                    }
                }
            }
        }
        Ok(Self::from_terms(a.var, a.ram, out, trunc))
    }

    /// Multiplicative inverse. Exact monomials invert exactly; otherwise the
    /// input must be truncated and the result is known to `T - 2·ord`.
    pub fn recip(&self) -> Result<Self> {
        let m = self.order_numerator()?.ok_or(Error::ZeroLeadingTerm)?;
        let lead = self.terms[&m].clone();
        let lead_inv = lead.inverse().ok_or(Error::ZeroLeadingTerm)?;
        if self.is_exact_monomial() {
            return Ok(Self::from_terms(self.var, self.ram, [(-m, lead_inv)], None));
        }
        let t = self.trunc.ok_or(Error::NeedsTruncation)?;
        let n = (t - m).max(0) as usize;
        // normalized coefficients a_j of self / (lead · ζ^m) = 1 + Σ a_j t^j
        let a: Vec<K> = (0..n).map(|j| self.coeff_at(m + j as i64)).collect();
        let mut b: Vec<K> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(lead_inv.clone());
                continue;
            }
            let mut acc = K::zero();
            for j in 1..=k {
                if !a[j].is_zero() && !b[k - j].is_zero() {
                    acc = acc + a[j].clone() * b[k - j].clone();
                }
            }
            b.push(-(acc * lead_inv.clone()));
        }
        Ok(Self::from_terms(
            self.var,
            self.ram,
            b.into_iter().enumerate().map(|(k, c)| (k as i64 - m, c)),
            Some(t - 2 * m),
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }

    /// Termwise derivative with respect to the variable.
    pub fn derivative(&self) -> Self {
        let r = self.ram as i64;
        Self::from_terms(
            self.var,
            self.ram,
            self.terms
                .iter()
                .map(|(k, c)| (k - r, c.clone() * K::from_ratio(*k, r))),
            self.trunc.map(|t| t - r),
        )
    }

    /// Integer power.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(self.var, K::one());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Coefficients replaced by their normal form.
    pub fn normalized(&self) -> Self {
        PuiseuxSeries {
            var: self.var,
            ram: self.ram,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.normalized()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Terms with exponent `<= bound` only, as an exact series.
    pub fn principal_part(&self, bound: Exponent) -> Self {
        let r = self.ram as i64;
        Self::from_terms(
            self.var,
            self.ram,
            self.terms
                .iter()
                .filter(|(k, _)| Exponent::new(**k, r) <= bound)
                .map(|(k, c)| (*k, c.clone())),
            None,
        )
    }

    /// Whether the two series agree on every exponent both of them know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.var != other.var {
            return false;
        }
        let (a, b) = self.common(other);
        let t = min_trunc(a.trunc, b.trunc);
        let keys: std::collections::BTreeSet<i64> =
            a.terms.keys().chain(b.terms.keys()).copied().collect();
        keys.into_iter()
            .filter(|k| t.is_none_or(|t| *k < t))
            .all(|k| a.coeff_at(k) == b.coeff_at(k))
    }

    /// Map coefficients into another field.
    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> PuiseuxSeries<L> {
        PuiseuxSeries::from_terms(
            self.var,
            self.ram,
            self.terms.iter().map(|(k, c)| (*k, f(c))),
            self.trunc,
        )
    }
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<K: Field> PartialEq for PuiseuxSeries<K> {
    /// Value equality: declared ramification is presentation only.
    fn eq(&self, other: &Self) -> bool {
        if self.var != other.var {
            return false;
        }
        let (a, b) = self.common(other);
        a.trunc == b.trunc && a.terms == b.terms
    }
}

impl PuiseuxSeries<Cyclotomic> {
    /// Substitute `ζ^{1/r} ↦ μ_r^k ζ^{1/r}`: the coefficient at `j/r` is
    /// multiplied by `μ_r^{jk}`.
    pub fn twist(&self, k: i64) -> Self {
        let r = self.ram;
        Self::from_terms(
            self.var,
            r,
            self.terms.iter().map(|(j, c)| {
                let w = Cyclotomic::root_of_unity(r, j * k);
                (*j, (c.clone() * w).simplify())
            }),
            self.trunc,
        )
    }
}
