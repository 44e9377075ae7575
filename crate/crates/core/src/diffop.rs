//! Differential operators `Σ a_i(z) D^i` with Puiseux coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Cyclotomic, Field};
use crate::series::{Exponent, Poly, PuiseuxSeries};

#[derive(Clone, Debug)]
pub struct DifferentialOperator<K> {
    var: char,
    coeffs: BTreeMap<usize, PuiseuxSeries<K>>,
}

impl<K: Field> DifferentialOperator<K> {
    /// Build from `(power, coefficient)` pairs. Exactly zero coefficients are
    /// dropped; repeated powers are summed.
    pub fn new<I>(var: char, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, PuiseuxSeries<K>)>,
    {
        let mut op = DifferentialOperator {
            var,
            coeffs: BTreeMap::new(),
        };
        for (i, c) in coeffs {
            op.accumulate(i, c)?;
        }
        Ok(op)
    }

    /// The derivation `D = d/dvar`.
    pub fn derivation(var: char) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, PuiseuxSeries::constant(var, K::one()));
        DifferentialOperator { var, coeffs }
    }

    /// Multiplication by a series.
    pub fn multiplication(c: PuiseuxSeries<K>) -> Self {
        let var = c.var();
        let mut coeffs = BTreeMap::new();
        if !c.is_exact_zero() {
            coeffs.insert(0, c);
        }
        DifferentialOperator { var, coeffs }
    }

    /// `a·D + b`.
    pub fn first_order(a: PuiseuxSeries<K>, b: PuiseuxSeries<K>) -> Result<Self> {
        Self::new(a.var(), [(1, a), (0, b)])
    }

    fn accumulate(&mut self, i: usize, c: PuiseuxSeries<K>) -> Result<()> {
        if c.var() != self.var {
            return Err(Error::VariableMismatch(self.var, c.var()));
        }
        let sum = match self.coeffs.remove(&i) {
            Some(prev) => prev.add(&c)?,
            None => c,
        };
        if !sum.is_exact_zero() {
            self.coeffs.insert(i, sum);
        }
        Ok(())
    }

    pub fn var(&self) -> char {
        self.var
    }

    /// Highest power of `D`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of `D^i` (exact zero when absent).
    pub fn coeff(&self, i: usize) -> PuiseuxSeries<K> {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| PuiseuxSeries::zero(self.var))
    }

    pub fn coefficients(&self) -> impl DoubleEndedIterator<Item = (usize, &PuiseuxSeries<K>)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.accumulate(*i, c.clone())?;
        }
        Ok(out)
    }

    /// Operator product, using `D^i ∘ b = Σ_k C(i,k) b^{(k)} D^{i-k}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.var != other.var {
            return Err(Error::VariableMismatch(self.var, other.var));
        }
        let mut out = DifferentialOperator {
            var: self.var,
            coeffs: BTreeMap::new(),
        };
        for (&j, b) in &other.coeffs {
            let mut deriv = b.clone();
            let max_i = self.order().unwrap_or(0);
            for k in 0..=max_i {
                for (&i, a) in self.coeffs.range(k..) {
                    let binom = K::from_int(binomial(i, k));
                    out.accumulate(i - k + j, a.mul(&deriv)?.scale(&binom))?;
                }
                deriv = deriv.derivative();
            }
        }
        Ok(out)
    }

    /// Whether the two operators agree on every coefficient range both know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let powers: std::collections::BTreeSet<usize> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        powers
            .into_iter()
            .all(|i| self.coeff(i).agrees_with(&other.coeff(i)))
    }

    fn first_order_parts(&self) -> Result<(PuiseuxSeries<K>, PuiseuxSeries<K>)> {
        if self.order().is_some_and(|o| o > 1) {
            return Err(Error::HigherOrderUnsupported);
        }
        Ok((self.coeff(1), self.coeff(0)))
    }

    /// `ρ^{-1} ∘ self ∘ ρ` for a `ρ` with `ρ'/ρ = λ`: replaces `D` by `D + λ`.
    pub fn conjugate_by_log_derivative(&self, lambda: &PuiseuxSeries<K>) -> Result<Self> {
        let (a, b) = self.first_order_parts()?;
        let shifted = a.mul(lambda)?.add(&b)?;
        Self::new(self.var, [(1, a), (0, shifted)])
    }

    /// Substitute `z = φ(x)`: `a(z) D_z + b(z)` becomes
    /// `(a(φ)/φ') D_x + b(φ)`.
    pub fn change_variable(&self, phi: &PuiseuxSeries<K>) -> Result<Self> {
        let (a, b) = self.first_order_parts()?;
        match phi.order()? {
            Some(o) if o > Exponent::zero() => {}
            _ => return Err(Error::BadSubstitution),
        }
        let var = phi.var();
        let a_new = if a.is_exact_zero() {
            PuiseuxSeries::zero(var)
        } else {
            a.compose(phi)?.div(&phi.derivative())?
        };
        let b_new = if b.is_exact_zero() {
            PuiseuxSeries::zero(var)
        } else {
            b.compose(phi)?
        };
        DifferentialOperator::new(var, [(1, a_new), (0, b_new)])
    }
}

impl<K: Field> PartialEq for DifferentialOperator<K> {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.coeffs == other.coeffs
    }
}

impl<K: Field> fmt::Display for DifferentialOperator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*D"),
                _ => format!("({c})*D^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `(1/P′)·D − P″/(2P′²)`, the part shared by the operator and its dual.
/// `truncation` bounds the expansion of `1/P′` about zero when `P′` is not a monomial.
fn normalized_derivation<K: Field>(
    p: &Poly<K>,
    truncation: Option<Exponent>,
) -> Result<(PuiseuxSeries<K>, PuiseuxSeries<K>)> {
    let d1 = p.derivative();
    if d1.is_zero() {
        return Err(Error::ZeroDerivative);
    }
    let d1 = d1.into_series();
    let d2 = d1.derivative();
    let inv = match truncation {
        Some(t) if d1.num_terms() > 1 => {
            let ord = d1.order()?.expect("nonzero");
            d1.truncated(t + ord + ord).recip()?
        }
        _ => d1.recip()?,
    };
    let half = K::from_ratio(1, 2);
    let b = d2.mul(&inv)?.mul(&inv)?.scale(&half).neg();
    Ok((inv, b))
}

fn degree_of<K: Field>(p: &Poly<K>) -> u32 {
    p.degree().unwrap_or(0)
}

/// The Kac-Schwarz operator `(1/W′)·D − W″/(2W′²) + Q`.
///
/// The coefficients are exact when `W′` is a monomial; otherwise use
/// [`ks_operator_truncated`].
pub fn ks_operator<K: Field>(w: &Poly<K>, q: &Poly<K>) -> Result<DifferentialOperator<K>> {
    ks_operator_impl(w, q, None)
}

/// [`ks_operator`] with `1/W′` expanded about `z = 0` up to `z^truncation`.
pub fn ks_operator_truncated<K: Field>(
    w: &Poly<K>,
    q: &Poly<K>,
    truncation: Exponent,
) -> Result<DifferentialOperator<K>> {
    ks_operator_impl(w, q, Some(truncation))
}

fn ks_operator_impl<K: Field>(
    w: &Poly<K>,
    q: &Poly<K>,
    truncation: Option<Exponent>,
) -> Result<DifferentialOperator<K>> {
    let (a, b) = normalized_derivation(w, truncation)?;
    DifferentialOperator::first_order(a, b.add(q.as_series())?)
}

/// The dual operator `(1/Q′)·D − Q″/(2Q′²) − W`; requires coprime degrees.
pub fn ks_dual_operator<K: Field>(w: &Poly<K>, q: &Poly<K>) -> Result<DifferentialOperator<K>> {
    let (dw, dq) = (degree_of(w), degree_of(q));
    if dw.gcd(&dq) != 1 {
        return Err(Error::NonCoprimeDegrees(dw, dq));
    }
    let (a, b) = normalized_derivation(q, None)?;
    DifferentialOperator::first_order(a, b.sub(w.as_series())?)
}

/// Check that `ρ^{-1} A ρ = 1/(p z^{p-1}) · D` for `A` the Kac-Schwarz
/// operator of `(z^p, z^q)` and `ρ = z^{(p-1)/2} exp(-p/(p+q) z^{p+q})`,
/// through `ρ'/ρ = (p-1)/(2z) - p z^{p+q-1}`.
pub fn verify_rho_identity(p: u32, q: u32) -> Result<bool> {
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(Error::NonCoprimeDegrees(p, q));
    }
    let z = 'z';
    let one = Cyclotomic::one();
    let w = Poly::monomial(z, one.clone(), p);
    let qq = Poly::monomial(z, one.clone(), q);
    let a = ks_operator(&w, &qq)?;
    let mono = |c: Cyclotomic, e: i64| PuiseuxSeries::monomial(z, c, Exponent::from(e));
    let lambda = mono(Cyclotomic::from_ratio(p as i64 - 1, 2), -1)
        .sub(&mono(Cyclotomic::from_int(p as i64), (p + q) as i64 - 1))?;
    let expected = DifferentialOperator::new(
        z,
        [(1, mono(Cyclotomic::from_ratio(1, p as i64), 1 - p as i64))],
    )?;
    Ok(a.conjugate_by_log_derivative(&lambda)? == expected)
}
