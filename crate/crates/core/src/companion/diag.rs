//! Formal diagonalization of `d/dx - C(x)` after the pullback `x = z^r`.
//!
//! Everything happens in `w = 1/z`, where the pulled-back system
//! `d/dw - Ã(w)` has a pole of order `h` and exponents step by integers.
//! With the leading matrix diagonalized by a constant `V`, the gauge
//! `G = V(I + Σ P_n w^n)` is solved order by order from
//! `Ã G - G' = G Λ`, one Sylvester equation per order.

use num_traits::{One, Zero};

use super::matrix::{scalar_inverse, scalar_mul, ScalarMatrix, SeriesMatrix};
use super::MatrixConnection;
use crate::error::{Error, Result};
use crate::scalar::{Cyclotomic, Field};
use crate::series::Exponent;
use crate::Series;

pub const W: char = 'w';

/// Result of [`diagonalize`].
#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// `Ã(w)`, after the optional shear `diag(z^i)`.
    pub pulled_back: SeriesMatrix,
    pub sheared: bool,
    /// Diagonal entries `λ_k(w)` of the `w`-form `d/dw - Λ`.
    pub lambda: Vec<Series>,
    /// `γ_k = -w²λ_k`: the exponents of `d/dz - diag(γ)`, written in `w = 1/z`.
    pub gammas: Vec<Series>,
    /// The gauge `G` with `Ã G - G' = G Λ` on known terms.
    pub gauge: SeriesMatrix,
    /// Number of orders solved past the leading one.
    pub terms: i64,
}

impl Diagonalization {
    /// `Ã G - G' - G Λ`, which vanishes on every determined coefficient.
    pub fn residual(&self) -> Result<SeriesMatrix> {
        let n = self.lambda.len();
        let lam = SeriesMatrix::from_fn(W, n, |i, j| {
            if i == j {
                self.lambda[i].clone()
            } else {
                Series::zero(W)
            }
        });
        self.pulled_back
            .mul(&self.gauge)?
            .sub(&self.gauge.derivative())?
            .sub(&self.gauge.mul(&lam)?)
    }

    pub fn verify(&self) -> Result<bool> {
        Ok(self.residual()?.is_zero_on_known_terms())
    }
}

/// `Ã_ij = -r w^{-r-1+s(i-j)} C_ij(w^{-r}) + s·δ_ij·i/w`, `s` the shear flag.
pub fn pulled_back(mc: &MatrixConnection, shear: bool) -> Result<SeriesMatrix> {
    let n = mc.size();
    let r = mc.ramification() as i64;
    let mut out = SeriesMatrix::zeros(W, n);
    for i in 0..n {
        for j in 0..n {
            let c = mc.matrix().get(i, j);
            if !c.is_exact() {
                return Err(Error::Invalid(
                    "connection matrix entries must be exact".into(),
                ));
            }
            let offset = -r - 1 + if shear { i as i64 - j as i64 } else { 0 };
            let mut terms = Vec::with_capacity(c.num_terms());
            for (e, coeff) in c.exponent_terms() {
                let k = -e * Exponent::from(r);
                if !k.is_integer() {
                    return Err(Error::Invalid(format!(
                        "entry exponent {e} is not in (1/{r})Z"
                    )));
                }
                let scaled = coeff.clone() * Cyclotomic::from_int(-r);
                terms.push((k.to_integer() + offset, scaled));
            }
            if shear && i == j && i > 0 {
                terms.push((-1, Cyclotomic::from_int(i as i64)));
            }
            out.set(i, j, Series::from_terms(W, 1, terms, None));
        }
    }
    Ok(out)
}

struct Leading {
    h: i64,
    eigenvalues: Vec<Cyclotomic>,
    v: ScalarMatrix,
}

/// Pole order, and the eigen-decomposition of a leading matrix that is a
/// generalized permutation matrix.
fn leading(a: &SeriesMatrix) -> Result<Leading> {
    let n = a.size();
    let mut h = i64::MIN;
    for row in a.rows() {
        for e in row {
            if let Some((k, _)) = e.terms().next() {
                h = h.max(-k);
            }
        }
    }
    if h < 2 {
        return Err(Error::UnsupportedLeadingMatrix(format!(
            "pole order {h} in w; formal reduction needs an irregular pole"
        )));
    }
    let a0: ScalarMatrix = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).coeff_at(-h)).collect())
        .collect();
    let mut perm = vec![usize::MAX; n];
    let mut col_used = vec![false; n];
    for (i, row) in a0.iter().enumerate() {
        let nz: Vec<usize> = (0..n).filter(|&j| !row[j].is_zero()).collect();
        if nz.len() != 1 || col_used[nz[0]] {
            return Err(Error::UnsupportedLeadingMatrix(
                "leading matrix is not a generalized permutation matrix".into(),
            ));
        }
        perm[i] = nz[0];
        col_used[nz[0]] = true;
    }
    let mut seen = vec![false; n];
    let mut eigenvalues = Vec::with_capacity(n);
    let mut columns: Vec<Vec<Cyclotomic>> = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut i = perm[start];
        while i != start {
            seen[i] = true;
            cycle.push(i);
            i = perm[i];
        }
        let len = cycle.len() as u32;
        let product = cycle
            .iter()
            .fold(Cyclotomic::one(), |acc, &i| acc * a0[i][perm[i]].clone());
        let base = product.principal_root(len)?;
        for k in 0..len {
            let lam = (base.clone() * Cyclotomic::root_of_unity(len, k as i64)).simplify();
            // v_{π(i)} = λ v_i / a_i along the cycle
            let mut v = vec![Cyclotomic::zero(); n];
            v[start] = Cyclotomic::one();
            for &i in &cycle[..cycle.len() - 1] {
                let a_i = a0[i][perm[i]].inverse().expect("nonzero entry");
                v[perm[i]] = (lam.clone() * v[i].clone() * a_i).simplify();
            }
            eigenvalues.push(lam);
            columns.push(v);
        }
    }
    for i in 0..n {
        for j in 0..i {
            if eigenvalues[i] == eigenvalues[j] {
                return Err(Error::EigenvaluesNotDistinct);
            }
        }
    }
    let v = (0..n)
        .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
        .collect();
    Ok(Leading { h, eigenvalues, v })
}

/// Diagonalize, solving `terms` orders (default `h + 3`).
pub fn diagonalize(mc: &MatrixConnection, terms: Option<i64>) -> Result<Diagonalization> {
    if mc.matrix().is_diagonal() {
        let a = pulled_back(mc, false)?;
        let lambda: Vec<Series> = (0..mc.size()).map(|i| a.get(i, i).clone()).collect();
        return Ok(Diagonalization {
            gammas: lambda.iter().map(to_gamma).collect(),
            lambda,
            gauge: SeriesMatrix::identity(W, mc.size()),
            pulled_back: a,
            sheared: false,
            terms: 0,
        });
    }
    let mut failure = None;
    for shear in [false, true] {
        let a = pulled_back(mc, shear)?;
        match leading(&a) {
            Ok(lead) => return solve(a, shear, lead, terms),
            Err(e) => failure = Some(e),
        }
    }
    Err(failure.expect("two attempts were made"))
}

fn to_gamma(lambda: &Series) -> Series {
    lambda.shift(Exponent::from(2)).neg()
}

fn solve(
    a: SeriesMatrix,
    sheared: bool,
    lead: Leading,
    terms: Option<i64>,
) -> Result<Diagonalization> {
    let n = a.size();
    let h = lead.h;
    let big_n = terms.unwrap_or(h + 3).max(1) as usize;
    let v_inv = scalar_inverse(&lead.v)?;
    let coeffs: Vec<ScalarMatrix> = (0..big_n)
        .map(|k| {
            let ak: ScalarMatrix = (0..n)
                .map(|i| (0..n).map(|j| a.get(i, j).coeff_at(k as i64 - h)).collect())
                .collect();
            scalar_mul(&scalar_mul(&v_inv, &ak), &lead.v)
        })
        .collect();
    let d = &lead.eigenvalues;
    let zero = || vec![vec![Cyclotomic::zero(); n]; n];
    let mut p: Vec<ScalarMatrix> = vec![super::matrix::scalar_identity(n)];
    let mut lam: Vec<Vec<Cyclotomic>> = vec![d.clone()];
    for m in 1..big_n {
        let mut r = coeffs[m].clone();
        let add = |r: &mut ScalarMatrix, x: &ScalarMatrix, c: Cyclotomic| {
            for i in 0..n {
                for j in 0..n {
                    if !x[i][j].is_zero() {
                        r[i][j] = r[i][j].clone() + c.clone() * x[i][j].clone();
                    }
                }
            }
        };
        for k in 1..m {
            add(
                &mut r,
                &scalar_mul(&coeffs[k], &p[m - k]),
                Cyclotomic::one(),
            );
        }
        let shifted = m as i64 - h + 1;
        if shifted >= 1 {
            add(&mut r, &p[shifted as usize], Cyclotomic::from_int(-shifted));
        }
        for j in 1..m {
            let pl: ScalarMatrix = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|k| p[j][i][k].clone() * lam[m - j][k].clone())
                        .collect()
                })
                .collect();
            add(&mut r, &pl, -Cyclotomic::one());
        }
        let mut pm = zero();
        let mut lm = vec![Cyclotomic::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let rij = r[i][j].simplify();
                if i == j {
                    lm[i] = rij;
                } else if !rij.is_zero() {
                    let gap = (d[j].clone() - d[i].clone())
                        .inverse()
                        .expect("distinct eigenvalues");
                    pm[i][j] = (rij * gap).simplify();
                }
            }
        }
        p.push(pm);
        lam.push(lm);
    }
    let trunc = big_n as i64;
    let lambda: Vec<Series> = (0..n)
        .map(|k| {
            Series::from_terms(
                W,
                1,
                (0..big_n).map(|m| (m as i64 - h, lam[m][k].clone())),
                Some(trunc - h),
            )
        })
        .collect();
    let vp: Vec<ScalarMatrix> = p.iter().map(|pm| scalar_mul(&lead.v, pm)).collect();
    let gauge = SeriesMatrix::from_fn(W, n, |i, j| {
        Series::from_terms(
            W,
            1,
            (0..big_n).map(|m| (m as i64, vp[m][i][j].clone())),
            Some(trunc),
        )
    });
    Ok(Diagonalization {
        gammas: lambda.iter().map(to_gamma).collect(),
        lambda,
        gauge,
        pulled_back: a,
        sheared,
        terms: trunc,
    })
}
