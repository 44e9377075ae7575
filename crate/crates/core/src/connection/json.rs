//! Stable JSON shapes. Terms are listed by ascending exponent.

use serde::{Deserialize, Serialize};

use super::{ConnectionAtInfinity, ExponentialFactor, LTComponent, LTObject};
use crate::scalar::{Cyclotomic, Field};
use crate::series::Exponent;
use crate::{Error, Result, Series};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Rational(String),
    Cyclotomic {
        cyclotomic_order: u32,
        coeffs: Vec<String>,
    },
}

impl CoeffJson {
    pub fn new(c: &Cyclotomic) -> Self {
        let c = c.simplify();
        match c.as_rational() {
            Some(q) => CoeffJson::Rational(q.to_string()),
            None => CoeffJson::Cyclotomic {
                cyclotomic_order: c.order(),
                coeffs: c.coeffs().iter().map(ToString::to_string).collect(),
            },
        }
    }

    pub fn value(&self) -> Result<Cyclotomic> {
        let rat = |s: &str| {
            s.parse()
                .map_err(|_| Error::Invalid(format!("not a rational number: {s:?}")))
        };
        Ok(match self {
            CoeffJson::Rational(s) => Cyclotomic::rational(rat(s)?),
            CoeffJson::Cyclotomic {
                cyclotomic_order,
                coeffs,
            } => Cyclotomic::from_coeffs(
                *cyclotomic_order,
                coeffs.iter().map(|s| rat(s)).collect::<Result<_>>()?,
            ),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: CoeffJson,
}

impl TermJson {
    fn new(e: Exponent, c: &Cyclotomic) -> Self {
        TermJson {
            exp: e.to_string(),
            coeff: CoeffJson::new(c),
        }
    }
}

fn series_terms(s: &Series) -> Vec<TermJson> {
    s.exponent_terms()
        .map(|(e, c)| TermJson::new(e, c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorJson {
    pub ramification: u32,
    pub terms: Vec<TermJson>,
    pub jordan: u32,
}

impl FactorJson {
    pub fn new(e: &ExponentialFactor, jordan: u32) -> Self {
        FactorJson {
            ramification: e.ramification(),
            terms: series_terms(e.series()),
            jordan,
        }
    }

    /// Rebuild the component; the result is canonicalized.
    pub fn to_component(&self) -> Result<LTComponent> {
        let r = self.ramification.max(1) as i64;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let e: Exponent = t
                .exp
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent {:?}", t.exp)))?;
            let k = e * Exponent::from(r);
            if !k.is_integer() {
                return Err(Error::Invalid(format!("exponent {e} is not in (1/{r})Z")));
            }
            terms.push((k.to_integer(), t.coeff.value()?));
        }
        let f = Series::from_terms(super::FACTOR_VAR, r as u32, terms, None);
        LTComponent::new(ExponentialFactor::from_series(f), self.jordan)
    }
}

impl From<&ExponentialFactor> for FactorJson {
    fn from(e: &ExponentialFactor) -> Self {
        FactorJson::new(e, 1)
    }
}

impl From<&LTComponent> for FactorJson {
    fn from(c: &LTComponent) -> Self {
        FactorJson::new(&c.factor, c.jordan)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectJson {
    pub rank: u32,
    pub components: Vec<FactorJson>,
}

impl From<&LTObject> for ObjectJson {
    fn from(o: &LTObject) -> Self {
        ObjectJson {
            rank: o.rank(),
            components: o.components().iter().map(FactorJson::from).collect(),
        }
    }
}

/// `F(x)/x` with terms by ascending exponent in `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionJson {
    pub variable: String,
    pub ramification: u32,
    pub f_over_x: Vec<TermJson>,
    /// Terms of `F/x` at or below this exponent are undetermined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unknown_from: Option<String>,
}

impl From<&ConnectionAtInfinity> for ConnectionJson {
    fn from(c: &ConnectionAtInfinity) -> Self {
        ConnectionJson {
            variable: c.var().to_string(),
            ramification: c.ramification(),
            f_over_x: series_terms(&c.f_over_x_series()),
            unknown_from: c.f_over_x_unknown_from().map(|e| e.to_string()),
        }
    }
}
