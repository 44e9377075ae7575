//! Rational powers, substitution and compositional inversion.
//!
//! Fractional powers of a series need a root of its leading coefficient. The
//! plain operations use the principal root; [`CompInverse`] carries the
//! branches that make `u ∘ v = id` hold exactly, and
//! [`PuiseuxSeries::compose_with_root`] substitutes along a given branch.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Exponent, PuiseuxSeries};
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

/// Coefficients `b_0..b_{n-1}` of `a^α` for a power series `a` with `a_0 = 1`
/// (J.C.P. Miller recurrence). `a` may be shorter than `n`; missing entries
/// are zero.
fn power_coefficients<K: Field>(a: &[K], alpha: Exponent, n: usize) -> Vec<K> {
    let mut b: Vec<K> = Vec::with_capacity(n);
    if n == 0 {
        return b;
    }
    b.push(K::one());
    let ap1 = alpha + Exponent::one();
    for k in 1..n {
        let mut acc = K::zero();
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            if a[j].is_zero() || b[k - j].is_zero() {
                continue;
            }
            let w = (ap1 * Exponent::from(j as i64) - Exponent::from(k as i64))
                / Exponent::from(k as i64);
            if w.is_zero() {
                continue;
            }
            acc = acc + K::from_ratio(*w.numer(), *w.denom()) * a[j].clone() * b[k - j].clone();
        }
        b.push(acc);
    }
    b
}

/// `self = lead · var^{m/r} · (1 + Σ_{j≥1} a_j var^{j/r})`. Returns
/// `(m, lead, a, known)` with `a_0 = 1`; `known` is the number of
/// determined `a_j` or `None` when exact.
struct UnitPart<K> {
    m: i64,
    lead: K,
    a: Vec<K>,
    known: Option<usize>,
}

impl<K: Field> PuiseuxSeries<K> {
    fn unit_part(&self) -> Result<UnitPart<K>> {
        let m = self.order_numerator()?.ok_or(Error::ZeroLeadingTerm)?;
        let lead = self.terms[&m].clone();
        let inv = lead.inverse().ok_or(Error::ZeroLeadingTerm)?;
        let known = self.trunc.map(|t| (t - m) as usize);
        let len = match known {
            Some(n) => n,
            None => (*self.terms.keys().next_back().unwrap() - m) as usize + 1,
        };
        let a = (0..len)
            .map(|j| self.coeff_at(m + j as i64) * inv.clone())
            .collect();
        Ok(UnitPart { m, lead, a, known })
    }

    /// `self^α` for rational `α`. The leading coefficient's root is `lead_root`
    /// (an `r`-th root when `α = n/r` in lowest terms) or the principal one.
    pub fn pow_rational(&self, alpha: Exponent, lead_root: Option<&K>) -> Result<Self> {
        if alpha.is_integer() {
            return self.powi(alpha.to_integer());
        }
        let unit = self.unit_part()?;
        let (num, den) = (*alpha.numer(), *alpha.denom() as u32);
        let root = match lead_root {
            Some(r) => r.clone(),
            None => unit.lead.principal_root(den)?,
        };
        let coeff = root.powi(num).ok_or(Error::ZeroLeadingTerm)?;
        let r = self.ram as i64;
        let lead_exp = alpha * Exponent::new(unit.m, r);
        let big_r = (r as u32).lcm(&(*lead_exp.denom() as u32));
        let step = big_r as i64 / r;
        let e0 = (lead_exp * Exponent::from(big_r as i64)).to_integer();
        let exact_unit = unit.known.is_none() && unit.a.len() == 1;
        if exact_unit {
            return Ok(Self::from_terms(self.var, big_r, [(e0, coeff)], None));
        }
        let n = unit.known.ok_or(Error::NeedsTruncation)?;
        let b = power_coefficients(&unit.a, alpha, n);
        Ok(Self::from_terms(
            self.var,
            big_r,
            b.into_iter()
                .enumerate()
                .map(|(k, c)| (e0 + k as i64 * step, c * coeff.clone())),
            Some(e0 + n as i64 * step),
        ))
    }

    /// Substitute `inner` for the variable of `self`, using principal roots
    /// for fractional powers of `inner`.
    ///
    /// Requires `ord(inner) > 0`, or an exact `self` (a Laurent polynomial)
    /// with `ord(inner) ≠ 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let outer = self.reduce_ramification();
        check_composable(&outer, inner)?;
        if outer.ram == 1 {
            return outer.compose_with_root(inner);
        }
        let root = inner.pow_rational(Exponent::new(1, outer.ram as i64), None)?;
        outer.compose_with_root(&root)
    }

    /// Substitute along a branch: `root` stands for `inner^{1/r}` where `r` is
    /// the declared ramification of `self`, so the term at `k/r` becomes
    /// `c · root^k`.
    pub fn compose_with_root(&self, root: &Self) -> Result<Self> {
        check_composable(self, root)?;
        let var = root.var;
        if self.is_exact_zero() {
            return Ok(Self::zero(var));
        }
        let mut acc = Self::zero(var);
        if let Some(t) = self.trunc {
            // unknown tail of the outer series starts at root^t
            let ord = root.order_numerator()?.expect("checked nonzero");
            acc = Self::unknown(var, root.ram, t * ord);
        }
        let inv = if self.terms.keys().any(|k| *k < 0) {
            Some(root.recip()?)
        } else {
            None
        };
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                root.powi(*k)?
            } else {
                inv.as_ref().unwrap().powi(-k)?
            };
            acc = acc.add(&p.scale(c))?;
        }
        Ok(acc)
    }
}

fn check_composable<K: Field>(outer: &PuiseuxSeries<K>, inner: &PuiseuxSeries<K>) -> Result<()> {
    let ord = inner
        .order()?
        .ok_or_else(|| Error::IllFormedComposition("inner series is zero".into()))?;
    if ord.is_zero() {
        return Err(Error::IllFormedComposition(
            "inner series has order zero".into(),
        ));
    }
    if ord.is_negative() && !outer.is_exact() {
        return Err(Error::IllFormedComposition(
            "inner series of negative order needs a Laurent polynomial outside".into(),
        ));
    }
    Ok(())
}

/// A compositional inverse `v` of `u`, together with the branches that
/// make the two substitutions exact.
#[derive(Clone, Debug)]
pub struct CompInverse<K> {
    /// `v(s)` with `u(v(s)) = s`.
    pub series: PuiseuxSeries<K>,
    /// `v(s)^{1/r}` on the branch matching `u`, where `r` is the ramification of `u`.
    pub root: PuiseuxSeries<K>,
    /// `u(ζ)^{1/|m|}` on the branch matching `v`, where `ord(u) = m/r`; used
    /// to substitute `u` into `v`.
    pub input_root: PuiseuxSeries<K>,
}

impl<K: Field> CompInverse<K> {
    /// `u ∘ v`, which is `s` up to the requested precision.
    pub fn left(&self, u: &PuiseuxSeries<K>) -> Result<PuiseuxSeries<K>> {
        u.compose_with_root(&self.root)
    }

    /// `v ∘ u`, which is the identity of `u`'s variable.
    pub fn right(&self) -> Result<PuiseuxSeries<K>> {
        self.series.compose_with_root(&self.input_root)
    }
}

/// Lagrange inversion of `u`, output in the variable `var`.
///
/// With `ord(u) = m/r`, the inverse lives in powers of `s^{1/|m|}`. The
/// result satisfies `u(v(s)) = s + O(s^{precision})`. Negative orders are
/// supported for exact monomials only.
pub fn comp_inverse<K: Field>(
    u: &PuiseuxSeries<K>,
    var: char,
    precision: Exponent,
) -> Result<CompInverse<K>> {
    let unit = u.unit_part()?;
    let m = unit.m;
    if m == 0 {
        return Err(Error::ZeroOrder);
    }
    let r = u.ram as i64;
    let monomial = unit.known.is_none() && unit.a.len() == 1;
    if m < 0 {
        if !monomial {
            return Err(Error::NegativeOrderInverse);
        }
        let am = (-m) as u32;
        let y = unit.lead.principal_root(am)?;
        let root = PuiseuxSeries::from_terms(var, am, [(-1, y.clone())], None);
        let series = root.powi(r)?;
        let input_root = PuiseuxSeries::from_terms(u.var, u.ram, [(-1, y)], None);
        return Ok(CompInverse {
            series,
            root,
            input_root,
        });
    }
    let mu = m as u32;
    let lead_inv = unit.lead.inverse().ok_or(Error::ZeroLeadingTerm)?;
    let y = lead_inv.principal_root(mu)?;
    let y_inv = y.inverse().ok_or(Error::ZeroLeadingTerm)?;
    if monomial {
        let root = PuiseuxSeries::from_terms(var, mu, [(1, y)], None);
        let series = root.powi(r)?;
        let input_root = PuiseuxSeries::from_terms(u.var, u.ram, [(1, y_inv)], None);
        return Ok(CompInverse {
            series,
            root,
            input_root,
        });
    }
    let wanted = ((precision - Exponent::one()) * Exponent::from(m))
        .ceil()
        .to_integer()
        .max(1) as usize;
    if let Some(known) = unit.known {
        if wanted > known {
            return Err(Error::PrecisionExhausted(format!(
                "inverse to s^{precision} needs {wanted} known terms, input has {known}"
            )));
        }
    }
    // τ_k = (1/k) [t^{k-1}] φ(t)^{-k/m}
    let mut tau: Vec<K> = Vec::with_capacity(wanted);
    for k in 1..=wanted {
        let b = power_coefficients(&unit.a, Exponent::new(-(k as i64), m), k);
        let c = b[k - 1].clone() * K::from_rational(Rational::new(1.into(), (k as i64).into()));
        tau.push(c);
    }
    let mut ypow = y.clone();
    let mut root_terms = Vec::with_capacity(wanted);
    for (i, c) in tau.into_iter().enumerate() {
        root_terms.push((i as i64 + 1, c * ypow.clone()));
        ypow = ypow * y.clone();
    }
    let root = PuiseuxSeries::from_terms(var, mu, root_terms, Some(wanted as i64 + 1));
    let series = root.powi(r)?;
    let n_in = unit.known.unwrap_or(wanted);
    let beta = power_coefficients(&unit.a, Exponent::new(1, m), n_in);
    let input_root = PuiseuxSeries::from_terms(
        u.var,
        u.ram,
        beta.into_iter()
            .enumerate()
            .map(|(j, c)| (j as i64 + 1, c * y_inv.clone())),
        Some(n_in as i64 + 1),
    );
    Ok(CompInverse {
        series,
        root,
        input_root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    type S = PuiseuxSeries<Cyclotomic>;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn int_series(var: char, coeffs: &[(i64, i64)], trunc: Option<i64>) -> S {
        S::from_terms(var, 1, coeffs.iter().map(|&(k, v)| (k, c(v))), trunc)
    }

    /// Brute-force inverse oracle: solve u(v(s)) = s one coefficient at a time
    /// by plain polynomial substitution (integer exponents only).
    fn brute_inverse(u: &[i64], n: usize) -> Vec<i64> {
        // u[j] is the coefficient of t^j, u[0] = 0, u[1] = 1
        let mut v = vec![0i64; n];
        v[1] = 1;
        for k in 2..n {
            // compute coefficient of s^k in u(v(s)) with v[k] = 0
            let mut total = 0i64;
            let mut pow = vec![0i64; n];
            pow[0] = 1;
            for &uj in u.iter().skip(1) {
                let mut next = vec![0i64; n];
                for (a, &pa) in pow.iter().enumerate() {
                    for (b, &vb) in v.iter().enumerate() {
                        if a + b < n {
                            next[a + b] += pa * vb;
                        }
                    }
                }
                pow = next;
                total += uj * pow[k];
            }
            v[k] = -total;
        }
        v
    }

    #[test]
    fn brute_force_oracle_matches_catalan_like_inverse() {
        assert_eq!(brute_inverse(&[0, 1, 1], 5), vec![0, 1, -1, 2, -5]);
    }

    #[test]
    fn inverse_of_identity() {
        let t = S::variable('t');
        let inv = comp_inverse(&t, 's', e(10, 1)).unwrap();
        assert_eq!(inv.series, S::variable('s'));
    }

    #[test]
    fn inverse_of_t_plus_t_squared() {
        let u = int_series('t', &[(1, 1), (2, 1)], None);
        let inv = comp_inverse(&u, 't', e(5, 1)).unwrap();
        let expected = brute_inverse(&[0, 1, 1], 5);
        let frozen = int_series('t', &[(1, 1), (2, -1), (3, 2), (4, -5)], Some(5));
        assert_eq!(inv.series, frozen);
        for (k, &v) in expected.iter().enumerate() {
            assert_eq!(inv.series.coeff(e(k as i64, 1)), c(v));
        }
    }

    #[test]
    fn composing_with_truncated_inverse() {
        let outer = int_series('t', &[(1, 1), (2, 1)], None);
        let inner = int_series('t', &[(1, 1), (2, -1), (3, 2), (4, -5)], Some(5));
        assert_eq!(
            outer.compose(&inner).unwrap(),
            int_series('t', &[(1, 1)], Some(5))
        );
    }

    #[test]
    fn polynomial_composition() {
        let outer = int_series('t', &[(2, 1)], None);
        let inner = int_series('t', &[(1, 1), (3, 1)], None);
        assert_eq!(
            outer.compose(&inner).unwrap(),
            int_series('t', &[(2, 1), (4, 2), (6, 1)], None)
        );
    }

    #[test]
    fn monomial_composition_multiplies_exponents() {
        let outer = S::monomial('t', c(1), e(-5, 3));
        let inner = S::monomial('s', c(1), e(3, 2));
        assert_eq!(
            outer.compose(&inner).unwrap(),
            S::monomial('s', c(1), e(-5, 2))
        );
    }

    #[test]
    fn negative_order_monomial_inverse() {
        let u = S::monomial('z', c(1), e(-2, 3));
        let inv = comp_inverse(&u, 's', e(4, 1)).unwrap();
        assert_eq!(inv.series, S::monomial('s', c(1), e(-3, 2)));
        assert_eq!(u.compose(&inv.series).unwrap(), S::variable('s'));
        assert_eq!(inv.right().unwrap(), S::variable('z'));
    }

    #[test]
    fn inverse_errors() {
        assert_eq!(
            comp_inverse(&S::constant('z', c(2)), 's', e(3, 1)).unwrap_err(),
            Error::ZeroOrder
        );
        let neg = int_series('z', &[(-1, 1), (0, 1)], None);
        assert_eq!(
            comp_inverse(&neg, 's', e(3, 1)).unwrap_err(),
            Error::NegativeOrderInverse
        );
        let short = int_series('z', &[(1, 1), (2, 1)], Some(3));
        assert!(matches!(
            comp_inverse(&short, 's', e(6, 1)),
            Err(Error::PrecisionExhausted(_))
        ));
        let two = S::monomial('z', c(2), e(2, 1))
            .add(&S::monomial('z', c(1), e(3, 1)))
            .unwrap();
        assert!(matches!(
            comp_inverse(&two, 's', e(4, 1)),
            Err(Error::RootNotInField(_))
        ));
    }

    #[test]
    fn ramified_inverse_round_trip() {
        // u = -ζ^{1/3} + ζ^{2/3}: branch choice matters for u ∘ v
        let u = S::from_terms('z', 3, [(1, c(-1)), (2, c(1))], Some(9));
        let inv = comp_inverse(&u, 's', e(3, 1)).unwrap();
        let id = inv.left(&u).unwrap();
        assert!(id.agrees_with(&S::variable('s')));
        assert!(id.truncation().unwrap() >= e(3, 1));
        let back = inv.right().unwrap();
        assert!(back.agrees_with(&S::variable('z')));
        assert!(back.truncation().unwrap() > e(1, 1));
    }

    #[test]
    fn fractional_powers() {
        let a = int_series('z', &[(0, 1), (1, 1)], Some(4));
        let h = a.pow_rational(e(1, 2), None).unwrap();
        assert_eq!(h.mul(&h).unwrap(), a);
        assert_eq!(
            int_series('z', &[(0, 1), (1, 1)], None).pow_rational(e(1, 2), None),
            Err(Error::NeedsTruncation)
        );
        let m = S::monomial('z', c(4), e(3, 1));
        assert_eq!(
            m.pow_rational(e(1, 2), None).unwrap(),
            S::monomial('z', c(2), e(3, 2))
        );
    }

    #[test]
    fn ill_formed_compositions() {
        let outer = int_series('t', &[(1, 1)], Some(3));
        let inner = S::monomial('s', c(1), e(-1, 1));
        assert!(matches!(
            outer.compose(&inner),
            Err(Error::IllFormedComposition(_))
        ));
        let unit = int_series('s', &[(0, 1), (1, 1)], None);
        assert!(matches!(
            outer.compose(&unit),
            Err(Error::IllFormedComposition(_))
        ));
    }
}
