//! Normalized Kac–Schwarz connections of a polynomial model `(W, Q)` and the
//! executable duality check between a model and its swap.

use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::connection::{ConnectionAtInfinity, LTObject, ObjectJson};
use crate::error::{Error, Result};
use crate::fourier::{fourier_factor_from, Transformed, MAX_TERMS};
use crate::scalar::{Cyclotomic, Field};
use crate::series::{comp_inverse, Exponent, Poly};
use crate::Series;

pub type Polynomial = Poly<Cyclotomic>;

/// A pair of polynomials of coprime positive degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPair {
    pub w: Polynomial,
    pub q: Polynomial,
}

impl ModelPair {
    pub fn new(w: Polynomial, q: Polynomial) -> Result<Self> {
        let (p, qd) = (w.degree().unwrap_or(0), q.degree().unwrap_or(0));
        if p == 0 || qd == 0 {
            return Err(Error::Invalid(
                "both polynomials need positive degree".into(),
            ));
        }
        if p.gcd(&qd) != 1 {
            return Err(Error::NonCoprimeDegrees(p, qd));
        }
        Ok(ModelPair { w, q })
    }

    pub fn degrees(&self) -> (u32, u32) {
        (self.w.degree().unwrap_or(0), self.q.degree().unwrap_or(0))
    }

    pub fn swapped(&self) -> Self {
        ModelPair {
            w: self.q.clone(),
            q: self.w.clone(),
        }
    }
}

/// `d/dx + F(x)/x` with `x = P(z)` and
/// `F(x)/x = (-P''/(2P'^2) + R)(z(x))`, computed from `n` working terms.
fn normalized_connection(
    p_poly: &Polynomial,
    r_poly: &Series,
    n: i64,
) -> Result<ConnectionAtInfinity> {
    let p = p_poly.degree().unwrap_or(0) as i64;
    // u(w) = 1/P(1/w), of order p in w = 1/z
    let at_inf = Series::from_terms(
        'w',
        1,
        p_poly.as_series().terms().map(|(k, c)| (-k, c.clone())),
        None,
    );
    let at_inf = if at_inf.is_exact_monomial() {
        at_inf
    } else {
        at_inf.truncated(Exponent::from(n - p))
    };
    let u = at_inf.recip()?;
    let w = comp_inverse(&u, 'ξ', Exponent::one() + Exponent::new(n, p))?.series;
    let z = w.recip()?;
    let d1 = p_poly.derivative();
    let d2 = d1.derivative();
    let mut h = r_poly.compose(&z)?;
    if !d2.is_zero() {
        let num = d2.as_series().compose(&z)?;
        let den = d1.as_series().compose(&z)?.powi(2)?;
        let half = Series::constant('ξ', Cyclotomic::from_ratio(-1, 2));
        h = h.add(&num.div(&den)?.mul(&half)?)?;
    }
    // g(ζ) = F(1/ζ) = (F/x)/ζ with ζ = ξ = 1/x
    Ok(ConnectionAtInfinity::from_zeta(
        'x',
        h.shift(-Exponent::one()),
    ))
}

/// Retry with doubled term counts until the class is determined.
fn adaptive(
    p_poly: &Polynomial,
    r_poly: &Series,
    start: Option<i64>,
) -> Result<Transformed<ConnectionAtInfinity>> {
    let p = p_poly.degree().unwrap_or(0) as i64;
    let q = r_poly.terms().next_back().map_or(0, |(k, _)| k.max(0));
    let mut n = start.unwrap_or(p + q + 4).max(1);
    loop {
        let attempt = normalized_connection(p_poly, r_poly, n).and_then(|c| {
            c.to_factor()?;
            Ok(c)
        });
        match attempt {
            Err(Error::PrecisionExhausted(_)) if n < MAX_TERMS => n = (2 * n).min(MAX_TERMS),
            other => return other.map(|value| Transformed { value, terms: n }),
        }
    }
}

/// The normalized Kac–Schwarz connection `Ā^{W,Q}`: `x = W(z)` and
/// `F/x = (-W''/(2W'^2) + Q)∘z(x)`.
pub fn ks_connection(w: &Polynomial, q: &Polynomial) -> Result<ConnectionAtInfinity> {
    Ok(ks_connection_from(w, q, None)?.value)
}

pub fn ks_connection_from(
    w: &Polynomial,
    q: &Polynomial,
    start: Option<i64>,
) -> Result<Transformed<ConnectionAtInfinity>> {
    let m = ModelPair::new(w.clone(), q.clone())?;
    adaptive(&m.w, m.q.as_series(), start)
}

/// The normalized dual connection `Â^{W,Q}`: `x = Q(z)` and
/// `F/x = (-Q''/(2Q'^2) - W)∘z(x)`.
pub fn ks_dual_connection(w: &Polynomial, q: &Polynomial) -> Result<ConnectionAtInfinity> {
    Ok(ks_dual_connection_from(w, q, None)?.value)
}

pub fn ks_dual_connection_from(
    w: &Polynomial,
    q: &Polynomial,
    start: Option<i64>,
) -> Result<Transformed<ConnectionAtInfinity>> {
    let m = ModelPair::new(w.clone(), q.clone())?;
    adaptive(&m.q, &m.w.as_series().neg(), start)
}

/// Outcome of a duality check. The two sides are objects so the same report
/// serves scalar and matrix checks.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityReport {
    pub holds: bool,
    pub lhs: LTObject,
    pub rhs: LTObject,
    /// Twist index per component of `lhs` realizing the isomorphism.
    pub twist: Option<Vec<u32>>,
    /// Largest working term count used.
    pub precision: i64,
    pub notes: Vec<String>,
}

impl DualityReport {
    pub fn compare(
        lhs: LTObject,
        rhs: LTObject,
        precision: i64,
        notes: Vec<String>,
    ) -> Result<Self> {
        let twist = lhs.iso(&rhs)?;
        Ok(DualityReport {
            holds: twist.is_some(),
            lhs,
            rhs,
            twist,
            precision,
            notes,
        })
    }

    pub fn to_json(&self) -> DualityJson {
        DualityJson {
            holds: self.holds,
            lhs: ObjectJson::from(&self.lhs),
            rhs: ObjectJson::from(&self.rhs),
            twist: self.twist.clone(),
            precision: self.precision,
            notes: self.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityJson {
    pub holds: bool,
    pub lhs: ObjectJson,
    pub rhs: ObjectJson,
    pub twist: Option<Vec<u32>>,
    pub precision: i64,
    pub notes: Vec<String>,
}

/// Compare `F(Â^{Q,W})` with `Ā^{Q,W}`. With `p = deg W` even the check is
/// refused unless `force` is set.
pub fn check_wq_duality(w: &Polynomial, q: &Polynomial, force: bool) -> Result<DualityReport> {
    check_wq_duality_from(w, q, force, None)
}

pub fn check_wq_duality_from(
    w: &Polynomial,
    q: &Polynomial,
    force: bool,
    start: Option<i64>,
) -> Result<DualityReport> {
    let model = ModelPair::new(w.clone(), q.clone())?;
    let (p, _) = model.degrees();
    let mut notes = Vec::new();
    if p % 2 == 0 {
        if !force {
            return Err(Error::EvenP(p));
        }
        notes.push(format!(
            "p = {p} is even; both sides computed without asserting the duality"
        ));
    }
    let swapped = model.swapped();
    let dual = ks_dual_connection_from(&swapped.w, &swapped.q, start)?;
    let image = fourier_factor_from(&dual.value.to_factor()?, start)?;
    let direct = ks_connection_from(&swapped.w, &swapped.q, start)?;
    let precision = dual.terms.max(image.terms).max(direct.terms);
    DualityReport::compare(
        LTObject::single(image.value)?,
        LTObject::single(direct.value.to_factor()?)?,
        precision,
        notes,
    )
}
