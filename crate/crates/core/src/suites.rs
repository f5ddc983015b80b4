//! Verification batteries behind `verify <suite>`.
//!
//! Each battery is deterministic given its config and seed. `tamper` injects
//! one known defect so the battery must fail and point at it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{lemma82_suite, make_d2, make_dirac, make_e1, make_m, make_n2};
use crate::error::{Error, Result};
use crate::magnus::{
    alpha_gamma_tables, beta_measures, beta_sequence, embed_e, log_lie_check, prop91_defect, shuffle_check_all,
    thm31_congruence, y, FreeWord, WordShape,
};
use crate::measure::corrections::{change_of_variables, dictionary_lambda, four_term_sum, lambda_combination, Shape};
use crate::measure::ops::{scale_action, translate};
use crate::measure::transform::{one_plus_t_pow, series_compose, series_mul};
use crate::measure::{box_integral, iwasawa_p, transform_f, DiracCombination, DistReport, LevelFamily, Poly};
use crate::octagon::{
    derive_factor_by_subst, octagon_product, prop85_check, thm8x_check_with, OctConfig, SymPoly,
};
use crate::padic::{bernoulli, binom, is_unit, vp, vp_factorial, PadicNum, PrimeContext};
use crate::report::{Check, SuiteReport};
use crate::ring::Coeff;
use crate::symmetry::{beta_power, group_sum_check, synthetic_alpha, transform_check};

pub const SUITES: [&str; 5] = ["octagon", "measures", "magnus", "transforms", "corrections"];

/// Knobs shared by every battery; unused ones are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub p: u64,
    pub n_max: u32,
    /// Octagon level.
    pub n: u32,
    /// Unit residue s; every unit when absent.
    pub sigma_rep: Option<u64>,
    pub degree: u32,
    pub terms: u32,
    pub level: u32,
    pub mod_exp: i64,
    pub seed: u64,
    pub tamper: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { p: 3, n_max: 3, n: 1, sigma_rep: None, degree: 3, terms: 6, level: 4, mod_exp: 3, seed: 0, tamper: false }
    }
}

const PREC: u32 = 16;

pub fn run(suite: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match suite {
        "octagon" => octagon(cfg),
        "measures" => measures(cfg),
        "magnus" => magnus(cfg),
        "transforms" => transforms(cfg),
        "corrections" => corrections(cfg),
        "all" => {
            let mut all = SuiteReport::new("all", cfg.seed);
            for s in SUITES {
                let r = run(s, cfg)?;
                all.extend(r.checks);
                all.details.extend(r.details);
            }
            Ok(all)
        }
        _ => Err(Error::InvalidInput(format!("unknown suite {suite:?}; expected one of {SUITES:?} or all"))),
    }
}

fn rng(cfg: &SuiteConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// `k` distinct integer units mod p from [−50, 50].
fn seeded_units(rng: &mut ChaCha8Rng, p: u64, k: usize) -> Vec<PadicNum> {
    let mut out: Vec<i64> = vec![];
    while out.len() < k {
        let c = rng.gen_range(-50i64..=50);
        if c.rem_euclid(p as i64) != 0 && c != 1 && !out.contains(&c) {
            out.push(c);
        }
    }
    out.into_iter().map(PadicNum::from).collect()
}

fn dist_check(name: String, r: DistReport) -> Check {
    let detail = match &r.failure {
        None => String::new(),
        Some(f) => format!("distribution defect {} at level {} point {:?} (sum over level {} lifts)", f.defect, f.n, f.a, f.n + 1),
    };
    Check::new(name, r.pass, detail)
}

fn congruent(a: &PadicNum, b: &PadicNum, p: u64, e: i64) -> bool {
    vp(&(a - b), p).is_none_or(|v| v >= e)
}

/// Adds one to a single stored value.
fn perturb(mu: LevelFamily, n: u32, a: &[u64]) -> LevelFamily {
    let v = mu.get(n, a) + PadicNum::one();
    mu.with_value(n, a, v)
}

fn octagon(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let configs = match cfg.sigma_rep {
        Some(s) => vec![OctConfig::new(cfg.p, cfg.n, s)?],
        None => OctConfig::all_units(cfg.p, cfg.n)?,
    };
    let mut rep = SuiteReport::new("octagon", cfg.seed);
    for (k, oc) in configs.iter().enumerate() {
        let tag = |s: &str| format!("octagon.{s}[p={},n={},s={}]", oc.p, oc.n, oc.s);
        let mut prod = octagon_product(oc);
        if cfg.tamper && k == 0 {
            prod.add_term(vec![y(0), y(1 % oc.pn() as u32)], SymPoly::int(1));
        }
        rep.push(Check::new(tag("constant"), prod.constant_term() == SymPoly::one(), ""));
        let xc = prod.coeff(&[crate::magnus::X]);
        rep.push(Check::new(tag("x_coeff"), xc.is_zero(), if xc.is_zero() { String::new() } else { xc.to_string() }));

        let p85 = prop85_check(oc)?;
        let detail = p85.unreduced.first().map(|(i, r)| format!("Y_{i}: {r}")).unwrap_or_default();
        rep.push(Check::new(tag("prop85"), p85.pass, detail));

        let t = thm8x_check_with(oc, &prod)?;
        let detail = match t.nonzero().next() {
            Some(r) => format!("{} residual at (a,b) = ({},{}): {}", r.form, r.a, r.b, r.poly),
            None if t.extra_relations_used.is_empty() => "residuals 0 modulo degree-1 and W12 relations".into(),
            None => format!("needed {}", t.extra_relations_used.join("; ")),
        };
        rep.push(Check::new(tag("thm8x"), t.pass, detail));
        rep.details.push(t.to_json());

        for name in ['C', 'E', 'G'] {
            let d = derive_factor_by_subst(name, oc)?;
            let detail = d
                .mismatches
                .first()
                .map(|m| format!("{}: display {} vs derived {}", m.mono, m.display, m.derived))
                .unwrap_or_default();
            rep.push(Check::new(tag(&format!("derive_{name}")), d.pass, detail));
        }
    }
    Ok(rep)
}

fn measures(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let p = cfg.p;
    let ctx = PrimeContext::new(p, cfg.n_max, PREC)?;
    let mut rng = rng(cfg, 1);
    let mut rep = SuiteReport::new("measures", cfg.seed);
    let units = seeded_units(&mut rng, p, 5);

    let a: i64 = rng.gen_range(-30..=30);
    rep.push(dist_check(format!("dist.dirac[a={a}]"), make_dirac(&[a], ctx).validate()));
    let non_unit = PadicNum::from(p as i64 * rng.gen_range(1i64..=9));
    for (k, c) in units.iter().chain([&non_unit, &PadicNum::frac(1, if p == 2 { 3 } else { 2 })]).enumerate() {
        let mut m = make_m(c, ctx)?;
        if cfg.tamper && k == 0 {
            m = perturb(m, cfg.n_max, &[1]);
        }
        rep.push(dist_check(format!("dist.M[c={c}]"), m.validate()));
    }
    for c in &units[..2] {
        rep.push(dist_check(format!("dist.E1[c={c}]"), make_e1(c, ctx)?.validate()));
        rep.push(dist_check(format!("dist.N2[c={c}]"), make_n2(c, ctx)?.validate()));
    }
    let level = cfg.n_max.min(2);
    let g = FreeWord::parse("[x,y0]", p, level)?;
    let (alpha, gamma) = alpha_gamma_tables(&g)?;
    let d2 = make_d2(&alpha, &gamma, ctx.with_n_max(level))?;
    rep.push(dist_check(format!("dist.D2[g=[x,y0],n_max={level}]"), d2.validate()));

    let lctx = ctx.with_n_max(cfg.n_max.min(3));
    for c in &units {
        rep.extend(lemma82_suite(c, lctx, cfg.mod_exp)?);
    }

    // ∫ x^{k−1} dE_{1,c} = (B_k/k)(1 − c^k)
    let moment_units: Vec<PadicNum> = [2i64, 7]
        .into_iter()
        .map(PadicNum::from)
        .filter(|c| is_unit(c, p))
        .chain(units.iter().cloned())
        .take(2)
        .collect();
    for c in &moment_units {
        let e = make_e1(c, ctx)?;
        let mut failed = None;
        for k in 1..=6u32 {
            let bi = box_integral(&e, &[0], 0, &Poly::monomial(vec![k - 1]), cfg.n_max)?;
            let want = bernoulli(k) / PadicNum::from(k as i64) * (PadicNum::one() - c.pow(k));
            if !congruent(&bi.value, &want, p, bi.guarantee) {
                failed = Some(format!("k={k}: {} vs {want} mod p^{}", bi.value, bi.guarantee));
                break;
            }
        }
        rep.push(Check::new(format!("moments.E1[c={c},n={}]", cfg.n_max), failed.is_none(), failed.unwrap_or_default()));
    }
    Ok(rep)
}

fn transforms(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let p = cfg.p;
    let (n, k) = (cfg.level, cfg.terms);
    let ctx = PrimeContext::new(p, n, PREC)?;
    let mut rep = SuiteReport::new("transforms", cfg.seed);
    let cs = [PadicNum::from(7), PadicNum::from(-2), PadicNum::frac(1, 2)];
    for (idx, c) in cs.iter().filter(|c| vp(c, p).is_none_or(|v| v >= 0)).enumerate() {
        let mut m = make_m(c, ctx)?;
        if cfg.tamper && idx == 0 {
            m = perturb(m, n, &[1]);
        }
        let pm = iwasawa_p(&m, k, n)?;
        let mut failed = None;
        for j in 0..=k {
            let want = binom(c, j + 1) - PadicNum::from((j == 0) as i64);
            let e = n as i64 - vp_factorial(j, p);
            let got = &pm.coeff(&[j]).value;
            if !congruent(got, &want, p, e) {
                failed = Some(format!("coefficient T^{j}: {got} vs {want} mod p^{e}"));
                break;
            }
        }
        rep.push(Check::new(format!("iwasawa.M[c={c},n={n},K={k}]"), failed.is_none(), failed.unwrap_or_default()));
    }

    let mut rng = rng(cfg, 2);
    let c = seeded_units(&mut rng, p, 1).remove(0);
    let mu = make_e1(&c, ctx)?;
    let base = iwasawa_p(&mu, k, n)?;
    let pv: Vec<PadicNum> = base.coeffs.iter().map(|x| x.value.clone()).collect();
    let g = base.coeffs.iter().map(|x| x.guarantee).min().unwrap_or(0);

    // P(T_c μ) = P(μ)·(1+T)^c
    let shift = PadicNum::from(rng.gen_range(-20i64..=20));
    let lhs = iwasawa_p(&translate(&mu, std::slice::from_ref(&shift))?, k, n)?;
    let rhs = series_mul(&pv, &one_plus_t_pow(&shift, k), k);
    let bad = lhs.coeffs.iter().zip(&rhs).position(|(l, r)| !congruent(&l.value, r, p, g.min(l.guarantee)));
    rep.push(Check::new(
        format!("functoriality.translate[c={shift}]"),
        bad.is_none(),
        bad.map(|j| format!("coefficient T^{j}")).unwrap_or_default(),
    ));

    // P(m_d μ)(T) = P(μ)((1+T)^d − 1)
    let d = seeded_units(&mut rng, p, 1).remove(0);
    let lhs = iwasawa_p(&scale_action(&mu, &d)?, k, n)?;
    let mut inner = one_plus_t_pow(&d, k);
    inner[0] = PadicNum::zero();
    let rhs = series_compose(&pv, &inner, k);
    let bad = lhs.coeffs.iter().zip(&rhs).position(|(l, r)| !congruent(&l.value, r, p, g.min(l.guarantee)));
    rep.push(Check::new(
        format!("functoriality.scale[d={d}]"),
        bad.is_none(),
        bad.map(|j| format!("coefficient T^{j}")).unwrap_or_default(),
    ));

    // F(μ) two ways: moments, and P rewritten through T = e^X − 1
    let f = transform_f(&mu, k, n)?;
    let via_p = base.to_exponential();
    let bad = f
        .coeffs
        .iter()
        .zip(&via_p.coeffs)
        .position(|(a, b)| !congruent(&a.value, &b.value, p, a.guarantee.min(b.guarantee)));
    rep.push(Check::new(
        format!("transform_f.routes[E1,c={c}]"),
        bad.is_none(),
        bad.map(|j| format!("coefficient X^{j}")).unwrap_or_default(),
    ));
    Ok(rep)
}

fn magnus(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (p, n_max, degree) = (cfg.p, cfg.n_max, cfg.degree);
    let ctx = PrimeContext::new(p, n_max, PREC)?;
    let mut rng = rng(cfg, 3);
    let mut rep = SuiteReport::new("magnus", cfg.seed);
    let words: Vec<FreeWord> = (0..10).map(|_| FreeWord::random_kernel(&mut rng, p, n_max, 8)).collect();
    let tag = |s: &str, w: usize| format!("magnus.{s}[p={p},n_max={n_max},D={degree},word={w}]");

    for (w, g) in words.iter().enumerate() {
        let mut s = embed_e(g, degree);
        if cfg.tamper && w == 0 {
            s.add_term(vec![y(0), y(1)], PadicNum::one());
        }
        let bad = shuffle_check_all(&s);
        let detail = bad
            .as_ref()
            .map(|(u, v)| {
                format!("shuffle fails for {} ⧢ {}", crate::magnus::mono_string(u), crate::magnus::mono_string(v))
            })
            .unwrap_or_default();
        rep.push(Check::new(tag("shuffle", w), bad.is_none(), detail));
        rep.push(Check::new(tag("log_lie", w), log_lie_check(&s), g.to_string()));

        for r in 1..=degree.min(3) as usize {
            let beta = beta_measures(g, r, ctx)?;
            rep.push(dist_check(tag(&format!("beta{r}.measure"), w), beta.validate()));
            let bound = -vp_factorial(r as u32, p);
            let ok = beta.tables().iter().flatten().all(|v| vp(v, p).is_none_or(|e| e >= bound));
            rep.push(Check::new(tag(&format!("beta{r}.denominator"), w), ok, ""));
        }

        let h = &words[(w + 1) % words.len()];
        let lhs = beta_sequence(&g.mul(h), 2, ctx)?;
        let rhs = beta_sequence(g, 2, ctx)?.star(&beta_sequence(h, 2, ctx)?)?;
        let bad = lhs.first_mismatch(&rhs);
        rep.push(Check::new(tag("star", w), bad.is_none(), bad.map(|i| format!("degree {i}")).unwrap_or_default()));

        let d = prop91_defect(g, 2, 1.min(n_max))?;
        let detail = d.as_ref().map(|(a, v)| format!("defect {v} at {a:?}")).unwrap_or_default();
        rep.push(Check::new(tag("prop91", w), d.is_none(), detail));

        let n = n_max - 1;
        let pn = p.pow(n);
        let mut failed = None;
        'shapes: for xs in [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]] {
            for i in 0..pn {
                let shape = WordShape::new(xs.to_vec(), vec![i])?;
                let r = thm31_congruence(g, &shape, n, 1)?;
                if !r.pass {
                    failed = Some(format!("{} achieved {:?} < guarantee {}", r.word, r.achieved, r.guarantee));
                    break 'shapes;
                }
            }
        }
        rep.push(Check::new(tag("thm31", w), failed.is_none(), failed.unwrap_or_default()));
    }

    // the shuffle check must see a perturbed series
    let mut bad = embed_e(&words[0], degree);
    bad.add_term(vec![y(0), y(0)], PadicNum::one());
    rep.push(Check::new("magnus.shuffle.negative_control", shuffle_check_all(&bad).is_some(), ""));
    Ok(rep)
}

fn corrections(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let p = cfg.p;
    let n = 1;
    let pn = p.pow(n) as i64;
    let mut rng = rng(cfg, 4);
    let mut rep = SuiteReport::new("corrections", cfg.seed);
    let shapes = Shape::all(2, 2);
    let points: Vec<[i64; 2]> = (0..pn).flat_map(|a| (0..pn).map(move |b| [a, b])).collect();

    for k in 0..10 {
        let beta = DiracCombination::random(&mut rng, 2, 6, 3 * pn);
        for (idx, name) in ["negate", "one_minus", "shift_by_one"].into_iter().enumerate() {
            let mut failed = None;
            'outer: for shape in &shapes {
                for i in &points {
                    let s = &change_of_variables(&beta, p, n, shape, i)[idx];
                    if !s.holds() {
                        failed = Some(format!("shape {:?} at i = {i:?}: {} vs {}", shape.0, s.lhs, s.rhs));
                        break 'outer;
                    }
                }
            }
            rep.push(Check::new(format!("corrections.{name}[p={p},measure={k}]"), failed.is_none(), failed.unwrap_or_default()));
        }
    }

    for k in 0..5 {
        let gamma = DiracCombination::random(&mut rng, 2, 5, 3 * pn);
        let beta = if cfg.tamper && k == 0 { gamma } else { gamma.symmetrize() };
        let mut failed = None;
        'outer: for shape in &shapes {
            for i in &points {
                let v = four_term_sum(&beta, p, n, shape, i);
                if !v.is_zero() {
                    failed = Some(format!("shape {:?} at i = {i:?}: sum {v}", shape.0));
                    break 'outer;
                }
            }
        }
        rep.push(Check::new(format!("corrections.four_term[p={p},measure={k}]"), failed.is_none(), failed.unwrap_or_default()));

        let mut failed = None;
        for n1 in 0..=2 {
            let shape = Shape::new(vec![0, n1, 0])?;
            let lambda = dictionary_lambda(&beta, p, n, &shape);
            for i in points.iter().filter(|i| i.iter().all(|&x| x > 1)) {
                let v = lambda_combination(&lambda, &shape, i, pn as u64);
                if !v.is_zero() {
                    failed = Some(format!("n_1 = {n1} at i = {i:?}: {v}"));
                }
            }
        }
        rep.push(Check::new(format!("corrections.lambda_relation[p={p},measure={k}]"), failed.is_none(), failed.unwrap_or_default()));
    }

    // measure powers need p ≥ 5
    let q = p.max(5);
    let ctx = PrimeContext::new(q, 2, PREC)?;
    for k in 0..2 {
        let c = seeded_units(&mut rng, q, 1).remove(0);
        let gamma = DiracCombination::random(&mut rng, 1, 4, 30);
        let nu = if cfg.tamper && k == 0 { gamma } else { gamma.symmetrize() }.to_family(ctx);
        let beta = beta_power(&synthetic_alpha(&nu, &c)?, 2)?;
        let g = group_sum_check(&beta, &c, 2, cfg.mod_exp)?;
        let detail = match &g.first_failure {
            Some((lv, a)) => format!("first difference at level {lv} point {a:?}"),
            None => format!("exact={}", g.exact),
        };
        rep.push(Check::new(format!("corrections.group_sum[p={q},c={c},seed_index={k}]"), g.pass, detail));
        let t = transform_check(&beta, &c, 3, 2)?;
        let detail = t
            .mismatches
            .first()
            .map(|m| format!("coefficient {:?}: {} vs {}", m.exp, m.lhs, m.rhs))
            .unwrap_or_else(|| format!("mod p^{}", t.guarantee));
        rep.push(Check::new(format!("corrections.transform_product[p={q},c={c},seed_index={k}]"), t.pass, detail));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SuiteConfig {
        SuiteConfig::default()
    }

    #[test]
    fn suites_pass_and_tamper_fails() {
        let small = SuiteConfig { n_max: 2, level: 3, terms: 4, ..cfg() };
        for s in SUITES {
            let r = run(s, &small).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.first_failure());
            let t = run(s, &SuiteConfig { tamper: true, ..small.clone() }).unwrap();
            assert!(!t.passed(), "{s} tamper not caught");
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run("nosuchsuite", &cfg()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn deterministic() {
        let a = run("corrections", &cfg()).unwrap();
        let b = run("corrections", &cfg()).unwrap();
        assert_eq!(a, b);
        let c = run("corrections", &SuiteConfig { seed: 9, ..cfg() }).unwrap();
        assert_ne!(a.to_text(), c.to_text());
    }

    #[test]
    fn tamper_pinpoints() {
        let t = run("measures", &SuiteConfig { tamper: true, ..cfg() }).unwrap();
        let f = t.first_failure().unwrap();
        assert!(f.name.starts_with("dist.M"));
        assert!(f.detail.contains("level 2 point [1]") && f.detail.contains("level 3"), "{}", f.detail);
        let t = run("octagon", &SuiteConfig { tamper: true, sigma_rep: Some(2), ..cfg() }).unwrap();
        assert!(t.first_failure().unwrap().detail.contains("(0,1)"));
    }
}
