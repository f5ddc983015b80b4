//! Linear structure, translations, scalings, signed permutations and exterior
//! products of level families.

use crate::error::{Error, Result};
use crate::padic::{is_unit, repr_mod, vp, vp_at_least, PadicNum};

use super::LevelFamily;

/// Σ c_i μ_i on the common range of levels.
pub fn linear_combine(coeffs: &[PadicNum], mus: &[&LevelFamily]) -> Result<LevelFamily> {
    assert_eq!(coeffs.len(), mus.len());
    let first = mus.first().ok_or_else(|| Error::InvalidInput("empty combination".into()))?;
    let n_max = mus.iter().map(|m| m.n_max()).min().unwrap();
    for m in mus {
        if m.dim() != first.dim() {
            return Err(Error::DimMismatch(first.dim(), m.dim()));
        }
        if m.p() != first.p() {
            return Err(Error::ContextMismatch);
        }
    }
    let ctx = first.ctx().with_n_max(n_max);
    let bound = mus
        .iter()
        .zip(coeffs)
        .map(|(m, c)| {
            let cv = vp(c, ctx.p).unwrap_or(0).min(0);
            (m.denom_bound() as i64 - cv) as u32
        })
        .max()
        .unwrap_or(0);
    let out = LevelFamily::from_fn(ctx, first.dim(), |n, a| {
        let mut s = PadicNum::zero();
        for (c, m) in coeffs.iter().zip(mus) {
            if !c.is_zero() {
                s += &(c * m.get(n, a));
            }
        }
        s
    });
    Ok(out.with_denom_bound(bound))
}

pub fn add(mu: &LevelFamily, nu: &LevelFamily) -> Result<LevelFamily> {
    linear_combine(&[PadicNum::one(), PadicNum::one()], &[mu, nu])
}

pub fn sub(mu: &LevelFamily, nu: &LevelFamily) -> Result<LevelFamily> {
    linear_combine(&[PadicNum::one(), -PadicNum::one()], &[mu, nu])
}

pub fn scale(c: &PadicNum, mu: &LevelFamily) -> LevelFamily {
    linear_combine(std::slice::from_ref(c), &[mu]).expect("single input")
}

fn residues(mu: &LevelFamily, c: &[PadicNum], n: u32) -> Result<Vec<u64>> {
    c.iter().map(|ci| repr_mod(ci, mu.p(), n)).collect()
}

/// T_c: (T_c μ)^{(n)}(a) = μ^{(n)}(a − ⟨c⟩_n).
pub fn translate(mu: &LevelFamily, c: &[PadicNum]) -> Result<LevelFamily> {
    if c.len() != mu.dim() {
        return Err(Error::DimMismatch(mu.dim(), c.len()));
    }
    let shifts: Vec<Vec<u64>> = (0..=mu.n_max()).map(|n| residues(mu, c, n)).collect::<Result<_>>()?;
    let ctx = *mu.ctx();
    Ok(LevelFamily::from_fn(ctx, mu.dim(), |n, a| {
        let pn = ctx.pn(n);
        let src: Vec<u64> = a.iter().zip(&shifts[n as usize]).map(|(&x, &s)| (x + pn - s) % pn).collect();
        mu.get(n, &src).clone()
    })
    .with_denom_bound(mu.denom_bound()))
}

/// T_(c,…,c).
pub fn translate_diag(mu: &LevelFamily, c: &PadicNum) -> Result<LevelFamily> {
    translate(mu, &vec![c.clone(); mu.dim()])
}

/// m_d (also written μ∘d^{-1}): (m_d μ)^{(n)}(x) = μ^{(n)}(⟨d^{-1}⟩_n·x).
pub fn scale_action(mu: &LevelFamily, d: &PadicNum) -> Result<LevelFamily> {
    if !is_unit(d, mu.p()) {
        return Err(Error::NotUnit(d.to_string()));
    }
    let inv = d.recip();
    let mult: Vec<u64> = (0..=mu.n_max()).map(|n| repr_mod(&inv, mu.p(), n)).collect::<Result<_>>()?;
    let ctx = *mu.ctx();
    Ok(LevelFamily::from_fn(ctx, mu.dim(), |n, a| {
        let pn = ctx.pn(n) as u128;
        let m = mult[n as usize] as u128;
        let src: Vec<u64> = a.iter().map(|&x| ((x as u128 * m) % pn.max(1)) as u64).collect();
        mu.get(n, &src).clone()
    })
    .with_denom_bound(mu.denom_bound()))
}

/// μ∘(−1) = m_{−1}(μ).
pub fn reflect(mu: &LevelFamily) -> LevelFamily {
    scale_action(mu, &PadicNum::from(-1)).expect("−1 is a unit")
}

/// Pushforward along x ↦ (ε_i x_i + c_i), with no sign factor.
pub fn pushforward_affine(mu: &LevelFamily, maps: &[(i8, PadicNum)]) -> Result<LevelFamily> {
    if maps.len() != mu.dim() {
        return Err(Error::DimMismatch(mu.dim(), maps.len()));
    }
    let shifts: Vec<PadicNum> = maps.iter().map(|(_, c)| c.clone()).collect();
    let res: Vec<Vec<u64>> = (0..=mu.n_max()).map(|n| residues(mu, &shifts, n)).collect::<Result<_>>()?;
    let ctx = *mu.ctx();
    Ok(LevelFamily::from_fn(ctx, mu.dim(), |n, b| {
        let pn = ctx.pn(n);
        let src: Vec<u64> = b
            .iter()
            .zip(maps)
            .zip(&res[n as usize])
            .map(|((&x, (eps, _)), &c)| {
                let d = (x + pn - c) % pn;
                if *eps < 0 {
                    (pn - d) % pn
                } else {
                    d
                }
            })
            .collect();
        mu.get(n, &src).clone()
    })
    .with_denom_bound(mu.denom_bound()))
}

/// The signed-permutation action: push forward along
/// a ↦ (ε_k a_{s^{-1}(k)})_k, then multiply by Πε_k. `s[k]` is s(k), 0-based.
pub fn signed_perm_action(mu: &LevelFamily, s: &[usize], eps: &[i8]) -> Result<LevelFamily> {
    let m = mu.dim();
    if s.len() != m || eps.len() != m {
        return Err(Error::DimMismatch(m, s.len()));
    }
    let mut seen = vec![false; m];
    for &k in s {
        if k >= m || seen[k] {
            return Err(Error::InvalidInput(format!("not a permutation: {s:?}")));
        }
        seen[k] = true;
    }
    let sign = eps.iter().filter(|&&e| e < 0).count() % 2;
    let ctx = *mu.ctx();
    Ok(LevelFamily::from_fn(ctx, m, |n, b| {
        let pn = ctx.pn(n);
        // preimage: coordinate k of the source is ε_{s(k)} b_{s(k)}
        let src: Vec<u64> = (0..m)
            .map(|k| {
                let j = s[k];
                if eps[j] < 0 {
                    (pn - b[j] % pn) % pn
                } else {
                    b[j]
                }
            })
            .collect();
        let v = mu.get(n, &src).clone();
        if sign == 1 {
            -v
        } else {
            v
        }
    })
    .with_denom_bound(mu.denom_bound()))
}

/// (α·β)^{(n)}(a,b) = α^{(n)}(a)·β^{(n)}(b).
pub fn exterior_product(alpha: &LevelFamily, beta: &LevelFamily) -> Result<LevelFamily> {
    if alpha.p() != beta.p() {
        return Err(Error::ContextMismatch);
    }
    let ctx = alpha.ctx().with_n_max(alpha.n_max().min(beta.n_max()));
    let i = alpha.dim();
    Ok(LevelFamily::from_fn(ctx, i + beta.dim(), |n, ab| alpha.get(n, &ab[..i]) * beta.get(n, &ab[i..]))
        .with_denom_bound(alpha.denom_bound() + beta.denom_bound()))
}

/// α^{·m}, with α^{·0} the unit scalar.
pub fn exterior_power(alpha: &LevelFamily, m: usize) -> Result<LevelFamily> {
    let mut acc = LevelFamily::scalar(*alpha.ctx(), PadicNum::one());
    for _ in 0..m {
        acc = exterior_product(&acc, alpha)?;
    }
    Ok(acc)
}

/// True iff vp(μ^{(k)}(a) − ν^{(k)}(a)) ≥ e for every k ≤ n and every a.
pub fn measures_equal(mu: &LevelFamily, nu: &LevelFamily, n: u32, e: i64) -> bool {
    first_difference(mu, nu, n, e).is_none()
}

/// First (level, point) where the congruence fails.
pub fn first_difference(mu: &LevelFamily, nu: &LevelFamily, n: u32, e: i64) -> Option<(u32, Vec<u64>)> {
    if mu.dim() != nu.dim() || mu.p() != nu.p() {
        return Some((0, vec![]));
    }
    let top = n.min(mu.n_max()).min(nu.n_max());
    for k in 0..=top {
        for a in mu.level_points(k) {
            if !vp_at_least(&(mu.get(k, &a) - nu.get(k, &a)), mu.p(), e) {
                return Some((k, a));
            }
        }
    }
    None
}

/// Exact equality on the common levels.
pub fn measures_identical(mu: &LevelFamily, nu: &LevelFamily) -> bool {
    let top = mu.n_max().min(nu.n_max());
    mu.dim() == nu.dim() && (0..=top).all(|k| mu.table(k) == nu.table(k))
}
