//! The local Fourier transform `F^{(∞,∞)}` on exponential classes of slope
//! greater than one.
//!
//! For `E_{f,p}` with `s = p·slope`, the dual coordinate is
//! `ζ̂ = 1/(ζ f(ζ))`. Inverting it as `ζ = v(ζ̂)` gives the image
//! `E_{g, s-p}` with `g(ζ̂) = -f(v(ζ̂)) + s/(2(s-p))`.

use num_traits::{One, Zero};

use crate::connection::{
    ConnectionAtInfinity, ExponentialFactor, LTComponent, LTObject, FACTOR_VAR,
};
use crate::error::{Error, Result};
use crate::scalar::{Cyclotomic, Field};
use crate::series::{comp_inverse, CompInverse, Exponent};
use crate::Series;

/// Largest working term count tried before giving up.
pub const MAX_TERMS: i64 = 1 << 10;

/// A transform result together with the term count that determined it.
#[derive(Clone, Debug, PartialEq)]
pub struct Transformed<T> {
    pub value: T,
    pub terms: i64,
}

/// Slope data `(p, s)` of an admissible class.
fn admissible(e: &ExponentialFactor) -> Result<(ExponentialFactor, i64, i64)> {
    let e = e.canonicalize()?;
    if !e.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let slope = e.slope();
    if slope <= Exponent::one() {
        return Err(Error::SlopeNotGreaterThanOne(slope.to_string()));
    }
    let p = e.ramification() as i64;
    let s = e.irregularity().to_integer();
    Ok((e, p, s))
}

/// `(p+q)`-style residue `s/(2(s-p))`.
fn residue(s: i64, p: i64) -> Cyclotomic {
    Cyclotomic::from_ratio(s, 2 * (s - p))
}

/// Invert `ζ̂ = 1/(ζ h(ζ))` where `zh = ζ·h(ζ)` has negative order. An
/// exact non-monomial `zh` is first cut to `n` terms past its order.
fn invert_dual(zh: &Series, n: i64) -> Result<CompInverse<Cyclotomic>> {
    let zh = if zh.is_exact() && !zh.is_exact_monomial() {
        let ord = zh.order()?.ok_or(Error::ZeroLeadingTerm)?;
        zh.truncated(ord + Exponent::new(n, zh.ramification() as i64))
    } else {
        zh.clone()
    };
    let u = zh.recip()?;
    let ord = u.order()?.ok_or(Error::ZeroLeadingTerm)?;
    let m = (ord * Exponent::from(u.ramification() as i64)).to_integer();
    let precision = match u.truncation_numerator() {
        // ask for every term `u` determines
        Some(t) => Exponent::one() + Exponent::new(t - m, m),
        None => Exponent::from(2),
    };
    comp_inverse(&u, FACTOR_VAR, precision)
}

/// `F^{(∞,∞)}(E_{f,p}) = E_{g,s-p}`, computed with an adaptive term count.
pub fn fourier_factor(e: &ExponentialFactor) -> Result<ExponentialFactor> {
    Ok(fourier_factor_from(e, None)?.value)
}

/// [`fourier_factor`] starting from `start` working terms instead of the
/// default `s + p + 4`.
pub fn fourier_factor_from(
    e: &ExponentialFactor,
    start: Option<i64>,
) -> Result<Transformed<ExponentialFactor>> {
    let (e, p, s) = admissible(e)?;
    let f = e.series();
    let zf = f.shift(Exponent::one());
    let mut n = start.unwrap_or(s + p + 4).max(1);
    loop {
        match fourier_factor_once(f, &zf, s, p, n) {
            Err(Error::PrecisionExhausted(msg)) => {
                if n >= MAX_TERMS {
                    return Err(Error::PrecisionExhausted(msg));
                }
                n = (2 * n).min(MAX_TERMS);
            }
            other => return other.map(|value| Transformed { value, terms: n }),
        }
    }
}

fn fourier_factor_once(
    f: &Series,
    zf: &Series,
    s: i64,
    p: i64,
    n: i64,
) -> Result<ExponentialFactor> {
    let inv = invert_dual(zf, n)?;
    let f_v = f.compose_with_root(&inv.root)?;
    let g = residue_plus(&f_v.neg(), s, p)?;
    ExponentialFactor::from_series(g).canonicalize()
}

fn residue_plus(g: &Series, s: i64, p: i64) -> Result<Series> {
    g.add(&Series::constant(g.var(), residue(s, p)))
}

/// The same transform on connections `d/dx + F(x)/x`: the image is
/// `d/dx̂ + s/(2(s-p))/x̂ + h^{-1}(x̂)` with `h(x) = -F(x)/x`.
///
/// An exact `F` is expanded adaptively; a truncated one is used as far as
/// it is known.
pub fn fourier_connection_at_infinity(c: &ConnectionAtInfinity) -> Result<ConnectionAtInfinity> {
    let (_, p, s) = admissible(&c.to_factor()?)?;
    // ζ·f(ζ) with f = -g
    let zf = c.zeta_series().neg().shift(Exponent::one());
    let exact = zf.is_exact();
    let mut n = s + p + 4;
    loop {
        match connection_once(c, &zf, s, p, n) {
            Err(Error::PrecisionExhausted(_)) if exact && n < MAX_TERMS => {
                n = (2 * n).min(MAX_TERMS);
            }
            other => return other,
        }
    }
}

fn connection_once(
    c: &ConnectionAtInfinity,
    zf: &Series,
    s: i64,
    p: i64,
    n: i64,
) -> Result<ConnectionAtInfinity> {
    let inv = invert_dual(zf, n)?;
    // ĝ(ζ̂) = c + 1/(ζ̂ v(ζ̂))
    let zv = inv.series.shift(Exponent::one());
    let g_hat = residue_plus(&zv.recip()?, s, p)?;
    let out = ConnectionAtInfinity::from_zeta(c.var(), g_hat);
    // the image must still determine its class
    out.to_factor()?;
    Ok(out)
}

/// Componentwise transform of a Jordan-free object.
pub fn fourier_object(o: &LTObject) -> Result<LTObject> {
    let mut out = Vec::with_capacity(o.len());
    for c in o.components() {
        if c.jordan != 1 {
            return Err(Error::JordanNotSupported);
        }
        out.push(LTComponent::new(fourier_factor(&c.factor)?, 1)?);
    }
    Ok(LTObject::new(out))
}

/// True when `ord` of a canonical image has the expected slope
/// `s/(s-p)`.
pub fn slope_law_holds(input: &ExponentialFactor, output: &ExponentialFactor) -> bool {
    let (p, s) = (input.ramification() as i64, input.irregularity());
    let expect = s / (s - Exponent::from(p));
    output.slope() == expect
        && output.ramification() as i64 == s.to_integer() - p
        && output.irregularity() == s
        && !s.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::parse_series;

    fn factor(t: &str) -> ExponentialFactor {
        ExponentialFactor::new(parse_series(t, 'ζ').unwrap()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let out = fourier_factor(&factor("ζ^(-3/2)")).unwrap();
        assert_eq!(out, factor("-ζ^-3 + 1/2"));
        let out = fourier_factor(&factor("ζ^(-5/3)")).unwrap();
        assert_eq!(out, factor("-ζ^(-5/2) + 1/4"));
        assert_eq!(out.ramification(), 2);
        assert!(matches!(
            fourier_factor(&factor("ζ^-1")),
            Err(Error::SlopeNotGreaterThanOne(_))
        ));
        assert!(matches!(
            fourier_factor(&ExponentialFactor::zero()),
            Err(Error::SlopeNotGreaterThanOne(_))
        ));
    }

    #[test]
    fn non_monomial_input() {
        let e = factor("ζ^(-5/3) + 2*ζ^-1 + ζ^(-1/3)");
        let out = fourier_factor(&e).unwrap();
        assert!(slope_law_holds(&e, &out));
        assert!(out.series().is_exact());
        // a larger starting term count gives the same answer
        let again = fourier_factor_from(&e, Some(64)).unwrap();
        assert_eq!(again.value, out);
    }

    #[test]
    fn integral_slope() {
        let e = factor("ζ^-2 + ζ^-1");
        let out = fourier_factor(&e).unwrap();
        assert!(slope_law_holds(&e, &out));
        assert_eq!(out.ramification(), 1);
    }

    #[test]
    fn connection_example() {
        let x = |t: &str| parse_series(t, 'x').unwrap();
        let c = ConnectionAtInfinity::from_f_over_x(&x("-x^(2/3)")).unwrap();
        let out = fourier_connection_at_infinity(&c).unwrap();
        assert_eq!(out.f_over_x_series(), x("5/4*x^-1 + x^(3/2)"));
        let direct = fourier_factor(&c.to_factor().unwrap()).unwrap();
        assert!(out
            .to_factor()
            .unwrap()
            .iso_equal(&direct)
            .unwrap()
            .is_some());
        let zero = ConnectionAtInfinity::from_f(&x("0")).unwrap();
        assert!(matches!(
            fourier_connection_at_infinity(&zero),
            Err(Error::SlopeNotGreaterThanOne(_))
        ));
    }

    #[test]
    fn both_paths_agree_on_general_input() {
        let x = |t: &str| parse_series(t, 'x').unwrap();
        let c =
            ConnectionAtInfinity::from_f_over_x(&x("-1/3*x^-1 + x^(2/3) + 3*x^(1/3) - 2")).unwrap();
        let a = fourier_connection_at_infinity(&c)
            .unwrap()
            .to_factor()
            .unwrap();
        let b = fourier_factor(&c.to_factor().unwrap()).unwrap();
        assert!(a.iso_equal(&b).unwrap().is_some(), "{a} vs {b}");
    }

    #[test]
    fn objects() {
        let o = LTObject::new(vec![
            LTComponent::new(factor("ζ^(-5/3)"), 1).unwrap(),
            LTComponent::new(factor("ζ^(-3/2)"), 1).unwrap(),
        ]);
        let out = fourier_object(&o).unwrap();
        let expect = LTObject::new(vec![
            LTComponent::new(factor("-ζ^(-5/2) + 1/4"), 1).unwrap(),
            LTComponent::new(factor("-ζ^-3 + 1/2"), 1).unwrap(),
        ]);
        assert_eq!(out, expect);
        let j = LTObject::new(vec![LTComponent::new(factor("ζ^(-5/3)"), 2).unwrap()]);
        assert_eq!(fourier_object(&j), Err(Error::JordanNotSupported));
    }
}
