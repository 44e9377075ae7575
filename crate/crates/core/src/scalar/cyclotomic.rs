//! Elements of cyclotomic fields `Q(μ_N)` in the power basis modulo `Φ_N`.
//!
//! Values of different orders are combined by lifting both to the lcm of the
//! orders. Equality is value equality; [`Cyclotomic::simplify`] moves an
//! element down to the smallest order whose field contains it.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rational_nth_root, Rational};
use super::Field;
use crate::error::{Error, Result};

thread_local! {
    static PHI_POLYS: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Coefficients (ascending) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Rc<Vec<i64>> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    if let Some(p) = PHI_POLYS.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = divide_monic(&num, &den);
    }
    let poly = Rc::new(num);
    PHI_POLYS.with(|c| c.borrow_mut().insert(n, poly.clone()));
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Reduce a polynomial in `μ` modulo `Φ_n`.
fn reduce(mut poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for top in (deg..poly.len()).rev() {
        let c = std::mem::take(&mut poly[top]);
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                poly[top - deg + j] -= &c * Rational::from_integer(BigInt::from(pj));
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn rational(q: Rational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    /// `μ_n^k` with `μ_n = exp(2πi/n)`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0);
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rational::zero(); (n as usize).max(k + 1)];
        poly[k] = Rational::one();
        Cyclotomic {
            order: n,
            coeffs: reduce(poly, n),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coordinates in the basis `1, μ_N, …, μ_N^{φ(N)-1}`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Build from coordinates in the power basis of order `n`.
    pub fn from_coeffs(n: u32, coeffs: Vec<Rational>) -> Self {
        let mut poly = coeffs;
        let deg = euler_phi(n) as usize;
        if poly.len() < deg {
            poly.resize(deg, Rational::zero());
        }
        Cyclotomic {
            order: n,
            coeffs: reduce(poly, n),
        }
    }

    /// Re-express in `Q(μ_m)`; `m` must be a multiple of the current order.
    pub fn lift(&self, m: u32) -> Self {
        assert!(
            m.is_multiple_of(self.order),
            "cannot lift order {} to {}",
            self.order,
            m
        );
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![Rational::zero(); step * self.coeffs.len().max(1)];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Cyclotomic::from_coeffs(m, poly)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = self.order.lcm(&other.order);
        (self.lift(m), other.lift(m))
    }

    /// Galois action `μ ↦ μ^a` for `a` coprime to the order.
    fn conjugate(&self, a: u32) -> Self {
        let n = self.order as usize;
        let mut poly = vec![Rational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            let idx = (j * a as usize) % n;
            poly[idx] += c;
        }
        Cyclotomic::from_coeffs(self.order, poly)
    }

    /// Decompose as `ρ · μ_L^k` with `ρ ≥ 0` rational, `0 ≤ k < L` and `L`
    /// minimal, if the element has that shape.
    pub fn as_scaled_root_of_unity(&self) -> Option<(Rational, u32, u32)> {
        if self.is_zero() {
            return Some((Rational::zero(), 1, 0));
        }
        let n = self.order;
        for j in 0..n {
            let t = self.clone() * Cyclotomic::root_of_unity(n, -(j as i64));
            if let Some(r) = t.as_rational() {
                let (rho, l, k) = if r.is_negative() {
                    (-r, 2 * n, (2 * j + n) % (2 * n))
                } else {
                    (r, n, j)
                };
                let g = l.gcd(&k);
                let (l, k) = if k == 0 { (1, 0) } else { (l / g, k / g) };
                return Some((rho, l, k));
            }
        }
        None
    }

    /// Smallest-order representation of the same value.
    pub fn simplify(&self) -> Self {
        if let Some(q) = self.as_rational() {
            return Cyclotomic::rational(q);
        }
        let n = self.order;
        for d in divisors(n) {
            if d == 1 || d == n {
                continue;
            }
            if let Some(c) = self.express_in(d) {
                return c;
            }
        }
        self.clone()
    }

    /// Solve for coordinates in `Q(μ_d)` (`d | order`), if the value lies there.
    fn express_in(&self, d: u32) -> Option<Self> {
        let rows = self.coeffs.len();
        let cols = euler_phi(d) as usize;
        let basis: Vec<Cyclotomic> = (0..cols)
            .map(|k| Cyclotomic::root_of_unity(d, k as i64).lift(self.order))
            .collect();
        // augmented system rows x (cols + 1)
        let mut m: Vec<Vec<Rational>> = (0..rows)
            .map(|i| {
                let mut row: Vec<Rational> = basis.iter().map(|b| b.coeffs[i].clone()).collect();
                row.push(self.coeffs[i].clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for v in m[r].iter_mut() {
                *v *= &inv;
            }
            let pivot = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if m[r..].iter().any(|row| !row[cols].is_zero()) {
            return None;
        }
        let mut sol = vec![Rational::zero(); cols];
        for (i, &c) in pivots.iter().enumerate() {
            sol[c] = m[i][cols].clone();
        }
        Some(Cyclotomic::from_coeffs(d, sol))
    }

    fn units(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.order.max(2)).filter(move |a| a.gcd(&self.order) == 1)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::rational(Rational::one())
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Self) -> Self {
        let (mut a, b) = if self.order == rhs.order {
            (self, rhs)
        } else {
            self.aligned(&rhs)
        };
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Self) -> Self {
        if self.order == 1 {
            let s = &self.coeffs[0];
            let mut r = rhs;
            for c in r.coeffs.iter_mut() {
                *c *= s;
            }
            return r;
        }
        if rhs.order == 1 {
            return rhs * self;
        }
        let (a, b) = if self.order == rhs.order {
            (self, rhs)
        } else {
            self.aligned(&rhs)
        };
        let mut prod = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclotomic {
            order: a.order,
            coeffs: reduce(prod, a.order),
        }
    }
}

impl Field for Cyclotomic {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Cyclotomic::rational(q.recip()));
        }
        // x · Π_{σ≠id} σ(x) is the (rational) norm.
        let mut others = Cyclotomic::one();
        for a in self.units().filter(|&a| a != 1) {
            others = others * self.conjugate(a);
        }
        let norm = (self.clone() * others.clone()).as_rational()?;
        Some(others * Cyclotomic::rational(norm.recip()))
    }

    fn from_rational(q: Rational) -> Self {
        Cyclotomic::rational(q)
    }

    fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn principal_root(&self, n: u32) -> Result<Self> {
        if n == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        let (rho, l, k) = self.as_scaled_root_of_unity().ok_or_else(|| {
            Error::RootNotInField(format!(
                "{self} is not a rational multiple of a root of unity"
            ))
        })?;
        let rho_root = rational_nth_root(&rho, n)
            .ok_or_else(|| Error::RootNotInField(format!("{rho} is not a perfect {n}-th power")))?;
        let root = Cyclotomic::rational(rho_root);
        if k == 0 {
            return Ok(root);
        }
        Ok((root * Cyclotomic::root_of_unity(l * n, k as i64)).simplify())
    }

    fn normalized(&self) -> Self {
        self.simplify()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.simplify();
        if let Some(q) = s.as_rational() {
            return write!(f, "{q}");
        }
        let mut out = String::new();
        for (j, c) in s.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = match j {
                0 => String::new(),
                1 => format!("E({})", s.order),
                _ => format!("E({})^{}", s.order, j),
            };
            if unit.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&unit);
            } else {
                out.push_str(&format!("{mag}*{unit}"));
            }
        }
        write!(f, "({out})")
    }
}
