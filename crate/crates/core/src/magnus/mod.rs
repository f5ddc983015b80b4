//! Words in the level-n free groups, their Magnus embedding, and the measures
//! read off from the Y-coefficients.

mod series;
mod word;

pub use series::{mono_string, parse_mono, shuffle, y, y_index, Mono, NcSeries, Series, Sym, X};
pub use word::{FreeWord, Gen, Letter};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::measure::{transform_f, unflatten, GradedSequence, LevelFamily};
use crate::padic::{factorial, vp, vp_factorial, PadicNum, PrimeContext};

fn ngens(p: u64, level: u32) -> u32 {
    p.pow(level) as u32
}

fn letter_exp(p: u64, level: u32, l: &Letter, degree: u32) -> NcSeries {
    let s = match l.gen {
        Gen::X => X,
        Gen::Y(i) => y(i),
    };
    let g = NcSeries::letter(ngens(p, level), degree, s);
    if l.exp < 0 { g.neg() } else { g }.exp()
}

/// E_n(w): the product of exp(±generator) over the letters, truncated at `degree`.
pub fn embed_e(w: &FreeWord, degree: u32) -> NcSeries {
    let (p, level) = (w.p(), w.level());
    let mut s = NcSeries::one(ngens(p, level), degree);
    for l in w.letters() {
        s = s.mul(&letter_exp(p, level, l, degree));
    }
    s
}

/// E⁰_n(w) directly: x-letters contribute exp(0) = 1.
pub fn embed_e0(w: &FreeWord, degree: u32) -> NcSeries {
    let (p, level) = (w.p(), w.level());
    let mut s = NcSeries::one(ngens(p, level), degree);
    for l in w.letters().iter().filter(|l| l.gen != Gen::X) {
        s = s.mul(&letter_exp(p, level, l, degree));
    }
    s
}

pub fn specialize_e0(s: &NcSeries) -> NcSeries {
    s.specialize_x0()
}

/// log(s) is a Lie series up to the truncation degree.
pub fn log_lie_check(s: &NcSeries) -> bool {
    s.constant_term().is_one() && s.log().is_lie()
}

/// ⟨s,u⟩⟨s,v⟩ = Σ_{w ∈ u ⧢ v} ⟨s,w⟩.
pub fn shuffle_check(s: &NcSeries, u: &[Sym], v: &[Sym]) -> bool {
    let lhs = s.coeff(u) * s.coeff(v);
    let rhs: PadicNum = shuffle(u, v)
        .iter()
        .map(|(w, k)| s.coeff(w) * PadicNum::from_int(*k))
        .sum();
    lhs == rhs
}

/// X-free monomials of degree 1..=max_degree over `ngens` generators.
pub fn y_monomials(ngens: u32, max_degree: u32) -> Vec<Mono> {
    let mut out = vec![];
    let mut layer: Vec<Mono> = vec![vec![]];
    for _ in 0..max_degree {
        layer = layer
            .iter()
            .flat_map(|m| {
                (0..ngens).map(move |i| {
                    let mut m = m.clone();
                    m.push(y(i));
                    m
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Checks every pair of X-free monomials with total degree ≤ the series degree.
/// Returns the first failing pair, if any.
pub fn shuffle_check_all(s: &NcSeries) -> Option<(Mono, Mono)> {
    let monos = y_monomials(s.ngens(), s.degree().saturating_sub(1));
    let pairs: Vec<(&Mono, &Mono)> = monos
        .iter()
        .flat_map(|u| monos.iter().map(move |v| (u, v)))
        .filter(|(u, v)| (u.len() + v.len()) as u32 <= s.degree())
        .collect();
    exec::find_first(pairs.len(), |k| {
        let (u, v) = pairs[k];
        (!shuffle_check(s, u, v)).then(|| (u.clone(), v.clone()))
    })
}

/// The series image of pr: X ↦ p^m X, Y_{i+kp^n} ↦ exp(−kX)·Y_i·exp(kX).
pub fn project_series(s: &NcSeries, p: u64, from: u32, to: u32) -> Result<NcSeries> {
    if to > from || ngens(p, from) != s.ngens() {
        return Err(Error::LevelOutOfRange { level: to, n_max: from });
    }
    let (d, pn) = (s.degree(), ngens(p, to));
    let scale = PadicNum::from_int(p.pow(from - to));
    let x = NcSeries::letter(pn, d, X);
    let sub = |sym: Sym| match y_index(sym) {
        None => x.scale(&scale),
        Some(j) => {
            let k = PadicNum::from_int(j / pn);
            let e = x.scale(&k).exp();
            e.inverse().mul(&NcSeries::letter(pn, d, y(j % pn))).mul(&e)
        }
    };
    let mut out = NcSeries::zero(pn, d);
    for (m, c) in s.terms() {
        let mut t = NcSeries::constant(pn, d, c.clone());
        for &l in m {
            t = t.mul(&sub(l));
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// λ-coefficients by name.
#[derive(Clone, Debug)]
pub struct Coeffs<'a>(pub &'a NcSeries);

impl Coeffs<'_> {
    pub fn lambda(&self, m: &[Sym]) -> PadicNum {
        self.0.coeff(m)
    }
    pub fn alpha(&self, i: u32) -> PadicNum {
        self.0.coeff(&[y(i)])
    }
    pub fn beta(&self, a: u32, b: u32) -> PadicNum {
        self.0.coeff(&[y(a), y(b)])
    }
    pub fn gamma(&self, i: u32) -> PadicNum {
        self.0.coeff(&[X, y(i)])
    }
}

pub fn extract_coeffs(s: &NcSeries) -> Coeffs<'_> {
    Coeffs(s)
}

fn require_kernel(g: &FreeWord) -> Result<()> {
    if g.kernel_check() {
        Ok(())
    } else {
        Err(Error::NotKernel(g.x_exponent()))
    }
}

fn require_level(g: &FreeWord, ctx: &PrimeContext) -> Result<()> {
    if g.p() != ctx.p || g.level() != ctx.n_max {
        return Err(Error::InvalidInput(format!(
            "word lives at p={}, level {} but the context is p={}, n_max={}",
            g.p(),
            g.level(),
            ctx.p,
            ctx.n_max
        )));
    }
    Ok(())
}

/// E⁰_n(pr(g)) for every level n ≤ level(g), at degree `degree`.
pub fn e0_tower(g: &FreeWord, degree: u32) -> Result<Vec<NcSeries>> {
    let levels: Vec<u32> = (0..=g.level()).collect();
    exec::map_slice(&levels, |&n| Ok(embed_e0(&g.project(n)?, degree))).into_iter().collect()
}

/// β_{r,g}: level n value at a is ⟨E⁰_n(pr g), Y_{a_1}..Y_{a_r}⟩.
pub fn beta_measures(g: &FreeWord, r: usize, ctx: PrimeContext) -> Result<LevelFamily> {
    require_kernel(g)?;
    require_level(g, &ctx)?;
    if r == 0 {
        return Ok(LevelFamily::scalar(ctx, PadicNum::one()));
    }
    let tower = e0_tower(g, r as u32)?;
    Ok(beta_from_tower(&tower, r, ctx))
}

fn beta_from_tower(tower: &[NcSeries], r: usize, ctx: PrimeContext) -> LevelFamily {
    if r == 0 {
        return LevelFamily::scalar(ctx, PadicNum::one());
    }
    let tables = (0..=ctx.n_max)
        .map(|n| {
            let size = (ctx.pn(n) as usize).pow(r as u32);
            let s = &tower[n as usize];
            (0..size)
                .map(|flat| {
                    let a = unflatten(&ctx, r, n, flat);
                    let m: Mono = a.iter().map(|&i| y(i as u32)).collect();
                    s.coeff(&m)
                })
                .collect()
        })
        .collect();
    LevelFamily::from_tables(ctx, r, tables).with_denom_bound(vp_factorial(r as u32, ctx.p) as u32)
}

/// (β_{0,g}, …, β_{M,g}).
pub fn beta_sequence(g: &FreeWord, m: usize, ctx: PrimeContext) -> Result<GradedSequence> {
    require_kernel(g)?;
    require_level(g, &ctx)?;
    let tower = e0_tower(g, m.max(1) as u32)?;
    GradedSequence::new((0..=m).map(|r| beta_from_tower(&tower, r, ctx)).collect())
}

/// α^{(n)}_i and γ^{(n)}_i tables for every level, from E_n(pr g).
pub fn alpha_gamma_tables(g: &FreeWord) -> Result<(Vec<Vec<PadicNum>>, Vec<Vec<PadicNum>>)> {
    let levels: Vec<u32> = (0..=g.level()).collect();
    let rows = exec::map_slice(&levels, |&n| {
        let s = embed_e(&g.project(n)?, 2);
        let c = extract_coeffs(&s);
        let pn = ngens(g.p(), n);
        Ok(((0..pn).map(|i| c.alpha(i)).collect(), (0..pn).map(|i| c.gamma(i)).collect()))
    })
    .into_iter()
    .collect::<Result<Vec<(Vec<PadicNum>, Vec<PadicNum>)>>>()?;
    Ok(rows.into_iter().unzip())
}

/// w = X^{n_0} Y_{i_1} X^{n_1} ⋯ Y_{i_r} X^{n_r}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordShape {
    pub xs: Vec<u32>,
    pub idx: Vec<u64>,
}

impl WordShape {
    pub fn new(xs: Vec<u32>, idx: Vec<u64>) -> Result<Self> {
        if xs.len() != idx.len() + 1 {
            return Err(Error::DimMismatch(xs.len(), idx.len() + 1));
        }
        Ok(Self { xs, idx })
    }

    pub fn degree(&self) -> u32 {
        self.xs.iter().sum::<u32>() + self.idx.len() as u32
    }

    pub fn mono(&self) -> Mono {
        let mut m = vec![X; self.xs[0] as usize];
        for (k, &i) in self.idx.iter().enumerate() {
            m.push(y(i as u32));
            m.extend(std::iter::repeat_n(X, self.xs[k + 1] as usize));
        }
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm31Report {
    pub word: String,
    pub lambda: PadicNum,
    pub riemann: PadicNum,
    /// vp(λ − Riemann sum); `None` when they agree exactly.
    pub achieved: Option<i64>,
    pub guarantee: i64,
    pub pass: bool,
}

/// λ_w^{(n)} against the Riemann sum of its integral formula at level n+m.
///
/// Words u at level n+m with an X letter map to p^m·(…) under pr, so the
/// difference has valuation ≥ m − Σ vp(n_l!) + min(0, min vp λ_u) over those u.
pub fn thm31_congruence(g: &FreeWord, shape: &WordShape, n: u32, m: u32) -> Result<Thm31Report> {
    let p = g.p();
    if n + m > g.level() {
        return Err(Error::LevelOutOfRange { level: n + m, n_max: g.level() });
    }
    let pn = p.pow(n);
    if let Some(&i) = shape.idx.iter().find(|&&i| i >= pn) {
        return Err(Error::IndexOutOfRange(format!("index {i} at level {n}")));
    }
    let d = shape.degree();
    let r = shape.idx.len();
    let w = shape.mono();
    let lambda = embed_e(&g.project(n)?, d).coeff(&w);
    let fine = embed_e(&g.project(n + m)?, d);

    let inv_fact = shape.xs.iter().fold(PadicNum::one(), |a, &k| a * PadicNum::from(factorial(k)).recip());
    let pm = p.pow(m) as usize;
    let points = pm.pow(r as u32);
    let terms = exec::map_range(points, |flat| {
        let alpha: Vec<i64> = (0..r).map(|k| ((flat / pm.pow((r - 1 - k) as u32)) % pm) as i64).collect();
        let u: Mono = (0..r).map(|k| y((shape.idx[k] + alpha[k] as u64 * pn) as u32)).collect();
        let c = fine.coeff(&u);
        if c.is_zero() {
            return c;
        }
        // (−α_1)^{n_0}·(α_1−α_2)^{n_1}⋯(α_r)^{n_r}
        let mut wt = PadicNum::from_int(-alpha[0]).pow(shape.xs[0]);
        for k in 1..r {
            wt = wt * PadicNum::from_int(alpha[k - 1] - alpha[k]).pow(shape.xs[k]);
        }
        wt = wt * PadicNum::from_int(alpha[r - 1]).pow(shape.xs[r]);
        c * wt
    });
    let riemann: PadicNum = terms.into_iter().sum::<PadicNum>() * &inv_fact;

    let worst = fine
        .terms()
        .iter()
        .filter(|(u, _)| u.contains(&X) && u.iter().filter(|&&s| s != X).count() == r)
        .filter_map(|(_, c)| vp(c, p))
        .min()
        .unwrap_or(0)
        .min(0);
    let guarantee = m as i64 - shape.xs.iter().map(|&k| vp_factorial(k, p)).sum::<i64>() + worst;
    let achieved = vp(&(&lambda - &riemann), p);
    let pass = achieved.is_none_or(|a| a >= guarantee);
    Ok(Thm31Report { word: mono_string(&w), lambda, riemann, achieved, guarantee, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripEntry {
    pub exp: Vec<u32>,
    pub from_measure: PadicNum,
    pub from_word: PadicNum,
    pub guarantee: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub r: usize,
    pub terms: u32,
    pub entries: Vec<RoundtripEntry>,
    pub pass: bool,
}

/// F(β_{r,g}) by moments of the measure versus the λ-coefficients of E_0(pr g):
/// Σ λ_{X^{n_0}Y⋯X^{n_{r−1}}Y} Π_k (−(X_k+⋯+X_r))^{n_{k−1}}.
/// Compared on exponents j with each j_k ≤ K and Σ j ≤ K.
pub fn prop72_roundtrip(g: &FreeWord, r: usize, k: u32, ctx: PrimeContext) -> Result<RoundtripReport> {
    if r == 0 {
        return Err(Error::InvalidInput("r must be positive".into()));
    }
    let beta = beta_measures(g, r, ctx)?;
    let f = transform_f(&beta, k, ctx.n_max)?;
    let s0 = embed_e(&g.project(0)?, r as u32 + k);

    // expand the word side as polynomials in X_1..X_r of total degree ≤ k
    let mut word_side = std::collections::BTreeMap::<Vec<u32>, PadicNum>::new();
    for (mono, lam) in s0.terms() {
        if mono.last() != Some(&X) && mono.iter().filter(|&&s| s != X).count() == r {
            let mut ns = vec![0u32; r];
            let mut slot = 0;
            for &s in mono {
                if s == X {
                    ns[slot] += 1;
                } else {
                    slot += 1;
                }
            }
            let mut poly = crate::measure::Poly::constant(r, lam.clone());
            for (kk, &e) in ns.iter().enumerate() {
                let lin: Vec<(usize, PadicNum)> = (kk..r).map(|v| (v, PadicNum::from_int(-1))).collect();
                poly = poly.mul(&crate::measure::Poly::affine(r, &lin, PadicNum::zero()).pow(e));
            }
            for (exp, c) in poly.terms() {
                if exp.iter().sum::<u32>() <= k {
                    *word_side.entry(exp.clone()).or_insert_with(PadicNum::zero) += c;
                }
            }
        }
    }
    let entries: Vec<RoundtripEntry> = f
        .coeffs
        .iter()
        .filter(|c| c.exp.iter().sum::<u32>() <= k)
        .map(|c| {
            let w = word_side.get(&c.exp).cloned().unwrap_or_else(PadicNum::zero);
            let pass = crate::padic::vp_at_least(&(&c.value - &w), ctx.p, c.guarantee);
            RoundtripEntry { exp: c.exp.clone(), from_measure: c.value.clone(), from_word: w, guarantee: c.guarantee, pass }
        })
        .collect();
    let pass = entries.iter().all(|e| e.pass);
    Ok(RoundtripReport { r, terms: k, entries, pass })
}

/// Σ_{s ∈ S_r} β_{s(a)} − Π α_{a_k} at every point of level n; returns the first nonzero.
pub fn prop91_defect(g: &FreeWord, r: usize, n: u32) -> Result<Option<(Vec<u64>, PadicNum)>> {
    let s = embed_e0(&g.project(n)?, r as u32);
    let pn = ngens(g.p(), n);
    let perms = permutations(r);
    let total = (pn as usize).pow(r as u32);
    Ok(exec::find_first(total, |flat| {
        let a: Vec<u32> = (0..r).map(|k| ((flat / (pn as usize).pow((r - 1 - k) as u32)) % pn as usize) as u32).collect();
        let sym: PadicNum = perms
            .iter()
            .map(|pi| s.coeff(&pi.iter().map(|&k| y(a[k])).collect::<Vec<_>>()))
            .sum();
        let prod = a.iter().fold(PadicNum::one(), |acc, &i| acc * s.coeff(&[y(i)]));
        let defect = sym - prod;
        (!defect.is_zero()).then(|| (a.iter().map(|&i| i as u64).collect(), defect))
    }))
}

pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests;
