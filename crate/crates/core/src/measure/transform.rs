//! The Iwasawa transform P(μ)(T) = ∫(1+T)^x dμ and F(μ)(X) = P(μ)(e^X − 1).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::padic::{factorial, vp_factorial, PadicNum};

use super::integral::{riemann_sum, Poly};
use super::LevelFamily;

/// Which basis the coefficient table is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Powers of T in P(μ).
    Iwasawa,
    /// Powers of X in F(μ).
    Exponential,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformCoeff {
    pub exp: Vec<u32>,
    pub value: PadicNum,
    pub guarantee: i64,
}

/// Truncated multivariate power series with a congruence exponent per coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IwasawaPoly {
    pub dim: usize,
    pub terms: u32,
    #[serde(skip)]
    pub basis: Basis,
    #[serde(skip)]
    pub p: u64,
    pub coeffs: Vec<TransformCoeff>,
}

impl IwasawaPoly {
    pub fn coeff(&self, exp: &[u32]) -> &TransformCoeff {
        let i = exponent_index(exp, self.terms);
        &self.coeffs[i]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Rewrite P-coefficients as F-coefficients through T = e^X − 1:
    /// (e^X − 1)^k = k!·Σ_j S(j,k) X^j / j!.
    pub fn to_exponential(&self) -> IwasawaPoly {
        assert_eq!(self.basis, Basis::Iwasawa);
        let k = self.terms;
        // w[j][i] = i!·S(j,i)/j!
        let s = stirling2(k);
        let w: Vec<Vec<PadicNum>> = (0..=k)
            .map(|j| {
                (0..=k)
                    .map(|i| {
                        PadicNum::from(factorial(i) * &s[j as usize][i as usize]) / PadicNum::from(factorial(j))
                    })
                    .collect()
            })
            .collect();
        let coeffs = exponents(self.dim, k)
            .into_iter()
            .map(|j| {
                let mut value = PadicNum::zero();
                let mut guarantee = i64::MAX;
                for c in &self.coeffs {
                    if c.exp.iter().zip(&j).any(|(i, jj)| i > jj) {
                        continue;
                    }
                    let weight = c
                        .exp
                        .iter()
                        .zip(&j)
                        .fold(PadicNum::one(), |a, (&i, &jj)| a * &w[jj as usize][i as usize]);
                    if weight.is_zero() {
                        continue;
                    }
                    let wv = weight.vp(self.p).unwrap_or(0);
                    guarantee = guarantee.min(c.guarantee + wv);
                    value += &(weight * &c.value);
                }
                TransformCoeff { exp: j, value, guarantee }
            })
            .collect();
        IwasawaPoly { dim: self.dim, terms: k, basis: Basis::Exponential, p: self.p, coeffs }
    }
}

/// Exponent vectors in [0, k]^dim, first coordinate most significant.
pub fn exponents(dim: usize, k: u32) -> Vec<Vec<u32>> {
    let base = (k + 1) as usize;
    let total = base.pow(dim as u32);
    (0..total)
        .map(|mut f| {
            let mut e = vec![0u32; dim];
            for slot in e.iter_mut().rev() {
                *slot = (f % base) as u32;
                f /= base;
            }
            e
        })
        .collect()
}

fn exponent_index(exp: &[u32], k: u32) -> usize {
    exp.iter().fold(0usize, |a, &e| a * (k as usize + 1) + e as usize)
}

/// S(j,i), Stirling numbers of the second kind, 0 ≤ i, j ≤ k.
pub fn stirling2(k: u32) -> Vec<Vec<BigInt>> {
    let k = k as usize;
    let mut s = vec![vec![BigInt::zero(); k + 1]; k + 1];
    s[0][0] = BigInt::from(1);
    for j in 1..=k {
        for i in 1..=j {
            s[j][i] = BigInt::from(i) * &s[j - 1][i] + &s[j - 1][i - 1];
        }
    }
    s
}

fn check_level(mu: &LevelFamily, n: u32) -> Result<()> {
    if n > mu.n_max() {
        return Err(Error::LevelOutOfRange { level: n, n_max: mu.n_max() });
    }
    Ok(())
}

/// P(μ) truncated at per-variable degree K, from the level-n Riemann sums of
/// Π binom(x_k, j_k); coefficient j is exact mod p^{n − d − Σ vp(j_k!)}.
pub fn iwasawa_p(mu: &LevelFamily, k: u32, n: u32) -> Result<IwasawaPoly> {
    check_level(mu, n)?;
    let p = mu.p();
    let dim = mu.dim();
    let exps = exponents(dim, k);
    let zero = vec![0u64; dim];
    let coeffs = exec::map_slice(&exps, |j| {
        let value = riemann_sum(mu, &zero, 0, &Poly::binomial(j), n)?;
        let guarantee = n as i64 - mu.denom_bound() as i64 - j.iter().map(|&x| vp_factorial(x, p)).sum::<i64>();
        Ok(TransformCoeff { exp: j.clone(), value, guarantee })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(IwasawaPoly { dim, terms: k, basis: Basis::Iwasawa, p, coeffs })
}

/// F(μ): coefficient of ΠX_k^{j_k} is (Π 1/j_k!)·∫Πx_k^{j_k}dμ, same guarantee shape.
pub fn transform_f(mu: &LevelFamily, k: u32, n: u32) -> Result<IwasawaPoly> {
    check_level(mu, n)?;
    let p = mu.p();
    let dim = mu.dim();
    let exps = exponents(dim, k);
    let zero = vec![0u64; dim];
    let coeffs = exec::map_slice(&exps, |j| {
        let fact = j.iter().fold(PadicNum::one(), |a, &x| a * PadicNum::from(factorial(x)));
        let moment = riemann_sum(mu, &zero, 0, &Poly::monomial(j.clone()), n)?;
        let guarantee = n as i64 - mu.denom_bound() as i64 - j.iter().map(|&x| vp_factorial(x, p)).sum::<i64>();
        Ok(TransformCoeff { exp: j.clone(), value: moment / fact, guarantee })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(IwasawaPoly { dim, terms: k, basis: Basis::Exponential, p, coeffs })
}

/// Dense truncated multivariate series with exact coefficients, used as an
/// oracle for transform identities (products, compositions).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSeries {
    pub dim: usize,
    pub terms: u32,
    pub coeffs: BTreeMap<Vec<u32>, PadicNum>,
}

impl DenseSeries {
    pub fn zero(dim: usize, terms: u32) -> Self {
        Self { dim, terms, coeffs: BTreeMap::new() }
    }

    pub fn from_univariate(c: &[PadicNum], dim: usize, var: usize, terms: u32) -> Self {
        let mut s = Self::zero(dim, terms);
        for (i, v) in c.iter().enumerate().take(terms as usize + 1) {
            let mut e = vec![0; dim];
            e[var] = i as u32;
            s.set(e, v.clone());
        }
        s
    }

    pub fn get(&self, e: &[u32]) -> PadicNum {
        self.coeffs.get(e).cloned().unwrap_or_else(PadicNum::zero)
    }

    pub fn set(&mut self, e: Vec<u32>, v: PadicNum) {
        if v.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, v);
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.terms);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if e.iter().any(|&x| x > self.terms) {
                    continue;
                }
                let v = out.get(&e) + c1 * c2;
                out.set(e, v);
            }
        }
        out
    }
}

/// Coefficients of (1+T)^c up to T^k.
pub fn one_plus_t_pow(c: &PadicNum, k: u32) -> Vec<PadicNum> {
    (0..=k).map(|j| crate::padic::binom(c, j)).collect()
}

/// Univariate truncated product.
pub fn series_mul(a: &[PadicNum], b: &[PadicNum], k: u32) -> Vec<PadicNum> {
    let k = k as usize;
    (0..=k)
        .map(|i| (0..=i).filter(|&j| j < a.len() && i - j < b.len()).map(|j| &a[j] * &b[i - j]).sum())
        .collect()
}

/// Univariate truncated inverse; a[0] must be nonzero.
pub fn series_inv(a: &[PadicNum], k: u32) -> Vec<PadicNum> {
    let k = k as usize;
    let a0 = a[0].recip();
    let mut out = vec![a0.clone()];
    for i in 1..=k {
        let s: PadicNum = (1..=i).filter(|&j| j < a.len()).map(|j| &a[j] * &out[i - j]).sum();
        out.push(-(s * &a0));
    }
    out
}

/// Univariate composition f(g(T)) with g(0) = 0.
pub fn series_compose(f: &[PadicNum], g: &[PadicNum], k: u32) -> Vec<PadicNum> {
    assert!(g.first().is_none_or(|g0| g0.is_zero()));
    let mut out = vec![PadicNum::zero(); k as usize + 1];
    let mut pow = vec![PadicNum::one()];
    for fi in f.iter().take(k as usize + 1) {
        for (o, c) in out.iter_mut().zip(&pow) {
            *o += &(fi * c);
        }
        pow = series_mul(&pow, g, k);
    }
    out
}
