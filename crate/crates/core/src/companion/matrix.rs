use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Cyclotomic, Field};
use crate::Series;

/// A square matrix of series in one variable, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix {
    var: char,
    n: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn zeros(var: char, n: usize) -> Self {
        SeriesMatrix {
            var,
            n,
            entries: vec![Series::zero(var); n * n],
        }
    }

    pub fn identity(var: char, n: usize) -> Self {
        Self::from_fn(var, n, |i, j| {
            if i == j {
                Series::constant(var, Cyclotomic::one())
            } else {
                Series::zero(var)
            }
        })
    }

    pub fn from_fn(var: char, n: usize, mut f: impl FnMut(usize, usize) -> Series) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j).with_var(var));
            }
        }
        SeriesMatrix { var, n, entries }
    }

    pub fn from_rows(var: char, rows: Vec<Vec<Series>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix must be square".into()));
        }
        if let Some(bad) = rows.iter().flatten().find(|s| s.var() != var) {
            return Err(Error::VariableMismatch(var, bad.var()));
        }
        Ok(SeriesMatrix {
            var,
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Constant matrix.
    pub fn constant(var: char, m: &[Vec<Cyclotomic>]) -> Self {
        Self::from_fn(var, m.len(), |i, j| Series::constant(var, m[i][j].clone()))
    }

    pub fn var(&self) -> char {
        self.var
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Series) {
        self.entries[i * self.n + j] = s.with_var(self.var);
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Series]> {
        self.entries.chunks(self.n.max(1))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_exact_zero()))
    }

    pub fn map(&self, f: impl Fn(&Series) -> Result<Series>) -> Result<Self> {
        Ok(SeriesMatrix {
            var: self.var,
            n: self.n,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|s| Ok(s.neg())).expect("negation cannot fail")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(SeriesMatrix {
            var: self.var,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.n;
        let mut out = Self::zeros(self.var, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Series::zero(self.var);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn derivative(&self) -> Self {
        self.map(|s| Ok(s.derivative()))
            .expect("differentiation cannot fail")
    }

    /// Whether every determined coefficient vanishes.
    pub fn is_zero_on_known_terms(&self) -> bool {
        self.entries.iter().all(|s| s.num_terms() == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Invalid(format!(
                "matrix sizes differ: {} vs {}",
                self.n, other.n
            )));
        }
        if self.var != other.var {
            return Err(Error::VariableMismatch(self.var, other.var));
        }
        Ok(())
    }

    /// Rows of entry texts.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

pub type ScalarMatrix = Vec<Vec<Cyclotomic>>;

pub fn scalar_identity(n: usize) -> ScalarMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Cyclotomic::one()
                    } else {
                        Cyclotomic::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn scalar_mul(a: &ScalarMatrix, b: &ScalarMatrix) -> ScalarMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Cyclotomic::zero();
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + a[i][k].clone() * b[k][j].clone();
                        }
                    }
                    acc.simplify()
                })
                .collect()
        })
        .collect()
}

/// Inverse by Gauss–Jordan elimination.
pub fn scalar_inverse(m: &ScalarMatrix) -> Result<ScalarMatrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv = scalar_identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Invalid("singular matrix".into()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inverse().expect("pivot is nonzero");
        for j in 0..n {
            a[col][j] = (a[col][j].clone() * p.clone()).simplify();
            inv[col][j] = (inv[col][j].clone() * p.clone()).simplify();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let da = factor.clone() * a[col][j].clone();
                let di = factor.clone() * inv[col][j].clone();
                a[r][j] = (a[r][j].clone() - da).simplify();
                inv[r][j] = (inv[r][j].clone() - di).simplify();
            }
        }
    }
    Ok(inv)
}
