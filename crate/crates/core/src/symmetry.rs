//! Signed-permutation symmetrization of the measure powers β_m = α^{·m}/m!.
//!
//! With α = ν + ½(E_{1,c} + (1−c)/2·δ_0) and ν even, summing g(β_m) over
//! {±1}^m ⋊ S_m collapses to (E_{1,c} + (1−c)/2·δ_0)^{·m}; for m = 2 the same
//! statement is read on Iwasawa transforms.

use serde::Serialize;

use crate::classical::{make_dirac, make_e1};
use crate::error::{Error, Result};
use crate::magnus::permutations;
use crate::measure::ops::{exterior_power, first_difference, linear_combine, reflect, signed_perm_action};
use crate::measure::transform::{exponents, one_plus_t_pow, series_inv, DenseSeries};
use crate::measure::{iwasawa_p, LevelFamily};
use crate::padic::{factorial, vp, PadicNum, PrimeContext};

/// E_{1,c} + (1−c)/2·δ_0, an odd measure.
pub fn e1_corrected(c: &PadicNum, ctx: PrimeContext) -> Result<LevelFamily> {
    let half = (PadicNum::one() - c) * PadicNum::frac(1, 2);
    linear_combine(&[PadicNum::one(), half], &[&make_e1(c, ctx)?, &make_dirac(&[0], ctx)])
}

/// γ + γ∘(−1).
pub fn even_part(gamma: &LevelFamily) -> Result<LevelFamily> {
    linear_combine(&[PadicNum::one(), PadicNum::one()], &[gamma, &reflect(gamma)])
}

/// α = ν + ½(E_{1,c} + (1−c)/2·δ_0).
pub fn synthetic_alpha(nu: &LevelFamily, c: &PadicNum) -> Result<LevelFamily> {
    let e = e1_corrected(c, *nu.ctx())?;
    linear_combine(&[PadicNum::one(), PadicNum::frac(1, 2)], &[nu, &e])
}

/// β_m = (1/m!)·α^{·m}.
pub fn beta_power(alpha: &LevelFamily, m: usize) -> Result<LevelFamily> {
    let inv = PadicNum::from(factorial(m as u32)).recip();
    linear_combine(&[inv], &[&exterior_power(alpha, m)?])
}

/// Σ_{g ∈ {±1}^m ⋊ S_m} g(β).
pub fn group_sum(beta: &LevelFamily) -> Result<LevelFamily> {
    let m = beta.dim();
    let mut terms = vec![];
    for s in permutations(m) {
        for mask in 0..1u32 << m {
            let eps: Vec<i8> = (0..m).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            terms.push(signed_perm_action(beta, &s, &eps)?);
        }
    }
    let refs: Vec<&LevelFamily> = terms.iter().collect();
    linear_combine(&vec![PadicNum::one(); refs.len()], &refs)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSumReport {
    pub m: usize,
    pub group_order: usize,
    pub level: u32,
    pub exponent: i64,
    pub pass: bool,
    pub exact: bool,
    /// First (level, point) where the congruence fails.
    pub first_failure: Option<(u32, Vec<u64>)>,
}

/// Σ g(β_m) against (E_{1,c} + (1−c)/2·δ_0)^{·m}, mod p^e up to `level`.
pub fn group_sum_check(beta: &LevelFamily, c: &PadicNum, level: u32, e: i64) -> Result<GroupSumReport> {
    let m = beta.dim();
    let lhs = group_sum(beta)?;
    let rhs = exterior_power(&e1_corrected(c, *beta.ctx())?, m)?;
    let first_failure = first_difference(&lhs, &rhs, level, e);
    let exact = first_difference(&lhs, &rhs, level, i64::MAX).is_none();
    Ok(GroupSumReport {
        m,
        group_order: (1 << m) * permutations(m).len(),
        level,
        exponent: e,
        pass: first_failure.is_none(),
        exact,
        first_failure,
    })
}

/// 1/T − c/((1+T)^c − 1) + (1−c)/2 up to T^k.
pub fn e1_transform(c: &PadicNum, k: u32) -> Vec<PadicNum> {
    // ((1+T)^c − 1)/T
    let q: Vec<PadicNum> = one_plus_t_pow(c, k + 2).into_iter().skip(1).collect();
    let inv = series_inv(&q, k + 1);
    let mut out: Vec<PadicNum> = (1..=k as usize + 1).map(|j| -(c * &inv[j])).collect();
    out[0] += &((PadicNum::one() - c) * PadicNum::frac(1, 2));
    out
}

/// (1+T)^{-1} − 1.
fn inverse_shift(k: u32) -> Vec<PadicNum> {
    (0..=k).map(|j| if j == 0 { PadicNum::zero() } else { PadicNum::from(if j % 2 == 0 { 1 } else { -1 }) }).collect()
}

/// P(f(T_u), g(T_v)) for a two-variable series P; f, g have zero constant term
/// or are the identity, and each lives in the named variable.
fn substitute2(pc: &DenseSeries, first: (usize, &[PadicNum]), second: (usize, &[PadicNum])) -> DenseSeries {
    let k = pc.terms;
    let powers = |(var, f): (usize, &[PadicNum])| -> Vec<DenseSeries> {
        let base = DenseSeries::from_univariate(f, 2, var, k);
        let mut out = vec![DenseSeries::from_univariate(&[PadicNum::one()], 2, var, k)];
        for _ in 0..k {
            let next = out.last().unwrap().mul(&base);
            out.push(next);
        }
        out
    };
    let (pu, pv) = (powers(first), powers(second));
    let mut out = DenseSeries::zero(2, k);
    for (e, c) in &pc.coeffs {
        let t = pu[e[0] as usize].mul(&pv[e[1] as usize]);
        for (f, v) in &t.coeffs {
            let s = out.get(f) + c * v;
            out.set(f.clone(), s);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformMismatch {
    pub exp: Vec<u32>,
    pub lhs: PadicNum,
    pub rhs: PadicNum,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformReport {
    pub terms: u32,
    pub level: u32,
    pub guarantee: i64,
    pub pass: bool,
    pub mismatches: Vec<TransformMismatch>,
}

/// The eight-term combination of P_{β_2} at T and (1+T)^{-1} − 1 against the
/// product of the two one-variable transforms.
pub fn transform_check(beta2: &LevelFamily, c: &PadicNum, k: u32, level: u32) -> Result<TransformReport> {
    if beta2.dim() != 2 {
        return Err(Error::DimMismatch(2, beta2.dim()));
    }
    let p = beta2.p();
    let pb = iwasawa_p(beta2, k, level)?;
    let guarantee = pb.coeffs.iter().map(|c| c.guarantee).min().unwrap_or(0);
    let mut pc = DenseSeries::zero(2, k);
    for co in &pb.coeffs {
        pc.set(co.exp.clone(), co.value.clone());
    }
    let mut id = vec![PadicNum::zero(); k as usize + 1];
    if k > 0 {
        id[1] = PadicNum::one();
    }
    let sh = inverse_shift(k);
    // (sign, first argument, second argument); variable 0 is T_1
    let combos: [(i64, (usize, &[PadicNum]), (usize, &[PadicNum])); 8] = [
        (1, (0, &id), (1, &id)),
        (1, (1, &id), (0, &id)),
        (-1, (0, &sh), (1, &id)),
        (-1, (1, &id), (0, &sh)),
        (-1, (0, &id), (1, &sh)),
        (-1, (1, &sh), (0, &id)),
        (1, (0, &sh), (1, &sh)),
        (1, (1, &sh), (0, &sh)),
    ];
    let mut lhs = DenseSeries::zero(2, k);
    for (sign, a, b) in combos {
        let t = substitute2(&pc, a, b);
        for (e, v) in &t.coeffs {
            let s = lhs.get(e) + PadicNum::from(sign) * v;
            lhs.set(e.clone(), s);
        }
    }
    let r = e1_transform(c, k);
    let rhs = DenseSeries::from_univariate(&r, 2, 0, k).mul(&DenseSeries::from_univariate(&r, 2, 1, k));
    let mismatches: Vec<TransformMismatch> = exponents(2, k)
        .into_iter()
        .filter_map(|e| {
            let (l, r) = (lhs.get(&e), rhs.get(&e));
            let ok = vp(&(&l - &r), p).is_none_or(|v| v >= guarantee);
            (!ok).then_some(TransformMismatch { exp: e, lhs: l, rhs: r })
        })
        .collect();
    Ok(TransformReport { terms: k, level, guarantee, pass: mismatches.is_empty(), mismatches })
}
