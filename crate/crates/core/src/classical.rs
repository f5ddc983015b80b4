//! The named measures δ_a, M(c), E_{1,c}, N₂(c), D₂ and the identities tying E_{1,c} to M(c).
//!
//! Case formulas are written once over [`Coeff`] so the octagon verifier can
//! evaluate them with a symbolic χ = s + p^n·t.

use crate::error::{Error, Result};
use crate::measure::ops::{linear_combine, measures_equal, measures_identical, reflect, translate};
use crate::measure::{riemann_sum, LevelFamily, Poly};
use crate::padic::{bernoulli_poly, binom_int, is_unit, repr_mod, PadicNum, PrimeContext};
use crate::report::Check;
use crate::ring::Coeff;

/// Position of a residue in the 1..p^n ordering (0 is read as p^n).
pub fn ord(a: u64, pn: u64) -> u64 {
    match a % pn {
        0 => pn,
        r => r,
    }
}

/// ⟨c⟩_n read in 1..p^n.
pub fn rep_one_based(c: &PadicNum, p: u64, n: u32) -> Result<u64> {
    Ok(ord(repr_mod(c, p, n)?, p.pow(n)))
}

/// M(c)^{(n)}(i) = shift + [1 ≤ i < ⟨c⟩_n], shift = (c − ⟨c⟩_n)/p^n.
pub fn m_value<R: Coeff>(i: u64, rep: u64, shift: &R) -> R {
    if i >= 1 && i < rep {
        shift.add(&R::one())
    } else {
        shift.clone()
    }
}

/// E_{1,c}^{(n)}(a) = a/p^n − c·r/p^n + (c−1)/2 with r = ⟨c^{-1}a⟩_n.
pub fn e1_value<R: Coeff>(a: u64, r: u64, pn: u64, c: &R) -> R {
    let inv = PadicNum::frac(1, pn as i64);
    let half = PadicNum::frac(1, 2);
    R::from_q(PadicNum::from(a as i64) * &inv)
        .sub(&c.scale(&(PadicNum::from(r as i64) * &inv)))
        .add(&c.sub(&R::one()).scale(&half))
}

/// N₂(c)^{(n)}(a,b): the two-brace case formula on the 1..p^n ordering.
pub fn n2_value<R: Coeff>(a: u64, b: u64, rep: u64, pn: u64, shift: &R) -> R {
    let (a, b) = (ord(a, pn), ord(b, pn));
    let low = |x: u64| x >= 1 && x < rep;
    let high = |x: u64| x >= rep && x <= pn;
    let mut v = R::zero();
    if a < b && ((low(a) && low(b)) || (high(a) && high(b))) {
        v = v.sub(shift);
    }
    if b < a && ((low(a) && low(b)) || (high(a) && high(b))) {
        v = v.add(shift);
    }
    if a < b && low(a) && low(b) {
        v = v.sub(&R::one());
    }
    if b < a && low(a) && low(b) {
        v = v.add(&R::one());
    }
    v
}

/// D₂^{(n)}(a,b) = γ_{−b} − γ_{−a} + (α_{−a} if a<b; −α_{−b} if b<a) on the 1..p^n ordering.
pub fn d2_value<R: Coeff>(a: u64, b: u64, pn: u64, alpha: impl Fn(u64) -> R, gamma: impl Fn(u64) -> R) -> R {
    let neg = |x: u64| (pn - x % pn) % pn;
    let base = gamma(neg(b)).sub(&gamma(neg(a)));
    let (oa, ob) = (ord(a, pn), ord(b, pn));
    if oa < ob {
        base.add(&alpha(neg(a)))
    } else if ob < oa {
        base.sub(&alpha(neg(b)))
    } else {
        base
    }
}

pub fn make_dirac(a: &[i64], ctx: PrimeContext) -> LevelFamily {
    LevelFamily::from_fn(ctx, a.len(), |n, b| {
        let pn = ctx.pn(n) as i64;
        let hit = a.iter().zip(b).all(|(&x, &y)| x.rem_euclid(pn) as u64 == y);
        PadicNum::from(hit as i64)
    })
}

/// δ_c for a p-integral rational point c (level n indicator of ⟨c⟩_n).
pub fn make_dirac_q(c: &PadicNum, ctx: PrimeContext) -> Result<LevelFamily> {
    let reps: Vec<u64> = (0..=ctx.n_max).map(|n| repr_mod(c, ctx.p, n)).collect::<Result<_>>()?;
    Ok(LevelFamily::from_fn(ctx, 1, |n, b| PadicNum::from((b[0] == reps[n as usize]) as i64)))
}

fn shifts(c: &PadicNum, ctx: &PrimeContext) -> Result<Vec<(u64, PadicNum)>> {
    (0..=ctx.n_max)
        .map(|n| {
            let rep = rep_one_based(c, ctx.p, n)?;
            let shift = (c - PadicNum::from(rep as i64)) / PadicNum::from(ctx.pn(n) as i64);
            Ok((rep, shift))
        })
        .collect()
}

/// M(c) for p-integral c.
pub fn make_m(c: &PadicNum, ctx: PrimeContext) -> Result<LevelFamily> {
    let sh = shifts(c, &ctx)?;
    Ok(LevelFamily::from_fn(ctx, 1, |n, i| {
        let (rep, shift) = &sh[n as usize];
        m_value(i[0], *rep, shift)
    }))
}

/// E_{1,c} for a unit c.
pub fn make_e1(c: &PadicNum, ctx: PrimeContext) -> Result<LevelFamily> {
    if !is_unit(c, ctx.p) {
        return Err(Error::NotUnit(c.to_string()));
    }
    let inv: Vec<u64> = (0..=ctx.n_max).map(|n| repr_mod(&c.recip(), ctx.p, n)).collect::<Result<_>>()?;
    Ok(LevelFamily::from_fn(ctx, 1, |n, a| {
        let pn = ctx.pn(n);
        let r = ((a[0] as u128 * inv[n as usize] as u128) % pn as u128) as u64;
        e1_value(a[0], r, pn, c)
    }))
}

/// N₂(c) for a unit c.
pub fn make_n2(c: &PadicNum, ctx: PrimeContext) -> Result<LevelFamily> {
    if !is_unit(c, ctx.p) {
        return Err(Error::NotUnit(c.to_string()));
    }
    let sh = shifts(c, &ctx)?;
    Ok(LevelFamily::from_fn(ctx, 2, |n, ab| {
        let (rep, shift) = &sh[n as usize];
        n2_value(ab[0], ab[1], *rep, ctx.pn(n), shift)
    }))
}

/// D₂ from level-indexed α and γ tables (`alpha[n][i]`, `gamma[n][i]`).
pub fn make_d2(alpha: &[Vec<PadicNum>], gamma: &[Vec<PadicNum>], ctx: PrimeContext) -> Result<LevelFamily> {
    for n in 0..=ctx.n_max {
        let want = ctx.pn(n) as usize;
        let (a, g) = (alpha.get(n as usize), gamma.get(n as usize));
        if a.map(Vec::len) != Some(want) || g.map(Vec::len) != Some(want) {
            return Err(Error::InvalidInput(format!("α/γ tables missing level {n}")));
        }
    }
    Ok(LevelFamily::from_fn(ctx, 2, |n, ab| {
        let (al, ga) = (&alpha[n as usize], &gamma[n as usize]);
        d2_value(ab[0], ab[1], ctx.pn(n), |i| al[i as usize].clone(), |i| ga[i as usize].clone())
    }))
}

/// Reflection (i), translation (ii) and corrected translation (iv) of E_{1,c}.
/// The reflection axiom for the coefficient measure lives in the octagon module.
pub fn lemma82_suite(c: &PadicNum, ctx: PrimeContext, e: i64) -> Result<Vec<Check>> {
    let q = |v: i64| PadicNum::from(v);
    let one = PadicNum::one();
    let e1 = make_e1(c, ctx)?;
    let m = make_m(c, ctx)?;
    let d0 = make_dirac(&[0], ctx);
    let dc = make_dirac_q(c, ctx)?;
    let u = (&one - c) / q(2);
    let tag = |s: &str| format!("lemma82.{s}[p={},c={}]", ctx.p, c);

    // i) E + E∘(−1) − (c−1)δ_0 = 0
    let lhs = linear_combine(&[one.clone(), one.clone(), -(c - &one)], &[&e1, &reflect(&e1), &d0])?;
    let zero = LevelFamily::zero(ctx, 1);
    let exact = measures_identical(&lhs, &zero);
    let i_ok = exact && measures_equal(&lhs, &zero, ctx.n_max, e);

    // ii) T_c(E) = E + M(c) + (1−c)δ_0
    let tce = translate(&e1, std::slice::from_ref(c))?;
    let rhs2 = linear_combine(&[one.clone(), one.clone(), &one - c], &[&e1, &m, &d0])?;
    let ii_ok = measures_equal(&tce, &rhs2, ctx.n_max, e);
    let ii_exact = measures_identical(&tce, &rhs2);

    // iv) T_c(E + uδ_0) = E + M(c) + (1−c)δ_0 + uδ_c
    let a = linear_combine(&[one.clone(), u.clone()], &[&e1, &d0])?;
    let lhs4 = translate(&a, std::slice::from_ref(c))?;
    let rhs4 = linear_combine(&[one.clone(), one.clone(), &one - c, u], &[&e1, &m, &d0, &dc])?;
    let iv_ok = measures_equal(&lhs4, &rhs4, ctx.n_max, e);

    Ok(vec![
        Check::new(tag("i"), i_ok, format!("exact={exact}")),
        Check::new(tag("ii"), ii_ok, format!("mod p^{e}, exact={ii_exact}")),
        Check::new(tag("iv"), iv_ok, format!("mod p^{e}")),
    ])
}

fn power_poly(shift: i64, pn: i64, k: u32) -> Poly {
    // ((x − shift)/p^n)^k
    Poly::affine(1, &[(0, PadicNum::frac(1, pn))], PadicNum::frac(-shift, pn)).pow(k)
}

/// ΔB_{j}(w) = B_j((p^n−i)/p^n) − c^j·B_j(⟨c^{-1}w⟩_n/p^n).
fn bernoulli_bracket(j: u32, i: u64, w: u64, c: &PadicNum, p: u64, n: u32) -> Result<PadicNum> {
    let pn = p.pow(n) as i64;
    let r = repr_mod(&(c.recip() * PadicNum::from(w as i64)), p, n)? as i64;
    Ok(bernoulli_poly(j, &PadicNum::frac(pn - i as i64, pn)) - c.pow(j) * bernoulli_poly(j, &PadicNum::frac(r, pn)))
}

fn check_box_index(i: u64, p: u64, n: u32) -> Result<()> {
    if i == 0 || i >= p.pow(n) {
        return Err(Error::IndexOutOfRange(format!("i = {i} must satisfy 0 < i < p^{n}")));
    }
    Ok(())
}

/// LHS − RHS of the inversion display for the coefficients ∫((x−i)/p^n)^μ dβ_1,
/// with integrals taken as Riemann sums at level n+m. Evaluated as printed.
pub fn thm32_defect(beta1: &LevelFamily, c: &PadicNum, i: u64, mu: u32, n: u32, m: u32) -> Result<PadicNum> {
    let p = beta1.p();
    check_box_index(i, p, n)?;
    let pn = p.pow(n) as i64;
    let eval = n + m;
    let int = |base: u64, k: u32| riemann_sum(beta1, &[base], n, &power_poly(base as i64, pn, k), eval);
    let sign = |k: u32| if k.is_multiple_of(2) { PadicNum::one() } else { -PadicNum::one() };
    let j_i = pn as u64 - i;
    let lhs = int(i, mu)? + sign(mu + 1) * int(j_i, mu)?;
    let mut rhs = PadicNum::zero();
    for j in 0..mu {
        rhs += &(PadicNum::from(binom_int(mu, j)) * int(i, j)?);
    }
    let mut bern = PadicNum::zero();
    for j in 0..=mu {
        let term = PadicNum::from(binom_int(mu, j))
            * PadicNum::from(i as i64 - pn).pow(mu - j)
            * PadicNum::from(pn).pow(j)
            / PadicNum::from(j as i64 + 1)
            * bernoulli_bracket(j + 1, i, j_i, c, p, n)?;
        bern += &term;
    }
    rhs += &(sign(mu) / PadicNum::from(pn).pow(mu) * bern);
    Ok(lhs - rhs)
}

/// LHS − RHS of the μ = 1 corollary display, as printed (its Bernoulli
/// arguments use ⟨c^{-1}(p^n − 1)⟩).
pub fn cor33_defect(beta1: &LevelFamily, c: &PadicNum, i: u64, n: u32, m: u32) -> Result<PadicNum> {
    let p = beta1.p();
    check_box_index(i, p, n)?;
    let pn = p.pow(n) as i64;
    let eval = n + m;
    let int = |base: u64, k: u32| riemann_sum(beta1, &[base], n, &power_poly(base as i64, pn, k), eval);
    let j_i = pn as u64 - i;
    let lhs = int(i, 1)? + int(j_i, 1)?;
    let lambda = int(i, 0)?;
    let w = pn as u64 - 1;
    let rhs = lambda
        + PadicNum::frac(i as i64 - pn, pn) * bernoulli_bracket(1, i, w, c, p, n)?
        + PadicNum::frac(1, 2) * bernoulli_bracket(2, i, w, c, p, n)?;
    Ok(lhs - rhs)
}
