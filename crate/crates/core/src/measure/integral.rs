//! Commutative polynomial integrands and Riemann sums over boxes i + p^n(Z_p)^r.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::padic::{vp, PadicNum};

use super::LevelFamily;

/// A polynomial in x_1..x_r with rational coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, PadicNum>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: PadicNum) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, PadicNum::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, PadicNum::one());
        p
    }

    /// Σ_k c_k x_k + c.
    pub fn affine(nvars: usize, lin: &[(usize, PadicNum)], c: PadicNum) -> Self {
        let mut p = Self::constant(nvars, c);
        for (i, a) in lin {
            p = p.add(&Self::var(nvars, *i).scale(a));
        }
        p
    }

    /// x^e for an exponent vector.
    pub fn monomial(exp: Vec<u32>) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, PadicNum::one());
        p
    }

    /// Π_k binom(x_k, j_k).
    pub fn binomial(j: &[u32]) -> Self {
        let r = j.len();
        let mut acc = Self::one(r);
        for (k, &jk) in j.iter().enumerate() {
            let x = Self::var(r, k);
            let mut b = Self::one(r);
            for i in 0..jk {
                b = b.mul(&x.add(&Self::constant(r, PadicNum::from(-(i as i64)))));
            }
            let fact = PadicNum::from(crate::padic::factorial(jk));
            acc = acc.mul(&b.scale(&fact.recip()));
        }
        acc
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &PadicNum)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: PadicNum) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(PadicNum::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &PadicNum) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |a, _| a.mul(self))
    }

    pub fn eval(&self, x: &[PadicNum]) -> PadicNum {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| acc * xi.pow(k)))
            .sum()
    }

    /// Substitute x_k ↦ base_k + scale·y_k.
    pub fn recentre(&self, base: &[PadicNum], scale: &PadicNum) -> Self {
        let r = self.nvars;
        let subs: Vec<Poly> = (0..r)
            .map(|k| Self::affine(r, &[(k, scale.clone())], base[k].clone()))
            .collect();
        let mut out = Self::zero(r);
        for (e, c) in &self.terms {
            let mut t = Self::constant(r, c.clone());
            for (k, &ek) in e.iter().enumerate() {
                t = t.mul(&subs[k].pow(ek));
            }
            out = out.add(&t);
        }
        out
    }

    /// max(0, −min vp(coefficient)).
    pub fn denominator_valuation(&self, p: u64) -> i64 {
        self.terms.values().filter_map(|c| vp(c, p)).map(|v| -v).max().unwrap_or(0).max(0)
    }
}

/// A Riemann-sum value with the exponent e such that the true integral agrees mod p^e.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxIntegral {
    pub value: PadicNum,
    pub guarantee: i64,
}

/// Σ_{a ≡ i mod p^n, a mod p^{eval}} poly(a)·μ^{(eval)}(a), with representatives in [0, p^eval).
pub fn riemann_sum(mu: &LevelFamily, base: &[u64], n: u32, poly: &Poly, eval: u32) -> Result<PadicNum> {
    check_box(mu, base, n, poly, eval)?;
    let ctx = mu.ctx();
    let pn = ctx.pn(n);
    let m = eval - n;
    let pm = ctx.pn(m);
    let r = mu.dim();
    let count = pm.pow(r as u32) as usize;
    let terms = crate::exec::map_range(count, |flat| {
        let mut rest = flat as u64;
        let mut a = vec![0u64; r];
        for k in (0..r).rev() {
            a[k] = base[k] + (rest % pm) * pn;
            rest /= pm;
        }
        let v = mu.get(eval, &a);
        if v.is_zero() {
            return PadicNum::zero();
        }
        let x: Vec<PadicNum> = a.iter().map(|&ai| PadicNum::from(ai as i64)).collect();
        poly.eval(&x) * v
    });
    Ok(terms.into_iter().sum())
}

/// Riemann sum at level n+m plus its congruence guarantee
/// e = m − d − (denominator valuation of the integrand in box coordinates).
pub fn box_integral(mu: &LevelFamily, base: &[u64], n: u32, poly: &Poly, eval: u32) -> Result<BoxIntegral> {
    if eval <= n {
        return Err(Error::InvalidInput(format!("eval level {eval} must exceed box level {n}")));
    }
    let value = riemann_sum(mu, base, n, poly, eval)?;
    Ok(BoxIntegral { value, guarantee: box_guarantee(mu, base, n, poly, eval) })
}

pub fn box_guarantee(mu: &LevelFamily, base: &[u64], n: u32, poly: &Poly, eval: u32) -> i64 {
    let p = mu.p();
    let b: Vec<PadicNum> = base.iter().map(|&x| PadicNum::from(x as i64)).collect();
    let local = poly.recentre(&b, &PadicNum::from(mu.ctx().pn(n) as i64));
    (eval - n) as i64 - mu.denom_bound() as i64 - local.denominator_valuation(p)
}

fn check_box(mu: &LevelFamily, base: &[u64], n: u32, poly: &Poly, eval: u32) -> Result<()> {
    if base.len() != mu.dim() || poly.nvars() != mu.dim() {
        return Err(Error::DimMismatch(mu.dim(), base.len()));
    }
    if eval > mu.n_max() || n > eval {
        return Err(Error::LevelOutOfRange { level: eval, n_max: mu.n_max() });
    }
    let pn = mu.ctx().pn(n);
    if base.iter().any(|&b| b >= pn) {
        return Err(Error::IndexOutOfRange(format!("box base {base:?} at level {n}")));
    }
    Ok(())
}
