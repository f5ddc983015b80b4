//! Acceptance battery: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p padic-octagon-cli --test acceptance` (custom harness).
//! Runtime limits assume the workspace test profile (opt-level 2).

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_octagon::classical::{lemma82_suite, make_d2, make_dirac, make_e1, make_m, make_n2};
use padic_octagon::magnus::{alpha_gamma_tables, FreeWord};
use padic_octagon::measure::{box_integral, iwasawa_p, DiracCombination, Poly};
use padic_octagon::octagon::{derive_factor_by_subst, octagon_product, prop85_check, thm8x_check, OctConfig, SymPoly};
use padic_octagon::ring::Coeff;
use padic_octagon::padic::{bernoulli, binom, is_unit, vp, vp_factorial};
use padic_octagon::suites::{self, SuiteConfig};
use padic_octagon::symmetry::{beta_power, group_sum_check, synthetic_alpha, transform_check};
use padic_octagon::{PadicNum, PrimeContext};

const GRID: [(u64, u32); 3] = [(3, 1), (5, 1), (2, 2)];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Self::new(false, detail)
    }
}

fn congruent(a: &PadicNum, b: &PadicNum, p: u64, e: i64) -> bool {
    vp(&(a - b), p).is_none_or(|v| v >= e)
}

fn units(seed: u64, p: u64, k: usize) -> Vec<PadicNum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<i64> = vec![];
    while out.len() < k {
        let c = rng.gen_range(-60i64..=60);
        if c.rem_euclid(p as i64) != 0 && c != 1 && !out.contains(&c) {
            out.push(c);
        }
    }
    out.into_iter().map(PadicNum::from).collect()
}

fn limit(elapsed: Duration, secs: u64) -> Option<String> {
    (elapsed > Duration::from_secs(secs)).then(|| format!("took {elapsed:.2?}, limit {secs} s"))
}

fn c1_iwasawa() -> Outcome {
    let t = Instant::now();
    let (n, k) = (4, 6);
    for p in [3, 5] {
        let ctx = PrimeContext::new(p, n, 16).unwrap();
        for c in [PadicNum::from(7), PadicNum::from(-2), PadicNum::frac(1, 2)] {
            let pm = iwasawa_p(&make_m(&c, ctx).unwrap(), k, n).unwrap();
            for j in 0..=k {
                let want = binom(&c, j + 1) - PadicNum::from((j == 0) as i64);
                let e = n as i64 - vp_factorial(j, p);
                let got = &pm.coeff(&[j]).value;
                if !congruent(got, &want, p, e) {
                    return Outcome::fail(format!("p={p} c={c} T^{j}: {got} vs {want} mod p^{e}"));
                }
            }
        }
    }
    let el = t.elapsed();
    match limit(el, 5) {
        Some(d) => Outcome::fail(d),
        None => Outcome::new(true, format!("p∈{{3,5}}, c∈{{7,-2,1/2}}, K=6 ({el:.2?})")),
    }
}

fn c2_lemma82() -> Outcome {
    let t = Instant::now();
    let mut n = 0;
    for p in [3, 5] {
        let ctx = PrimeContext::new(p, 3, 16).unwrap();
        for c in units(p, p, 5) {
            for check in lemma82_suite(&c, ctx, 3).unwrap() {
                n += 1;
                let exact_needed = check.name.starts_with("lemma82.i[");
                if !check.pass || (exact_needed && !check.detail.contains("exact=true")) {
                    return Outcome::fail(check.text_line());
                }
            }
        }
    }
    let el = t.elapsed();
    match limit(el, 10) {
        Some(d) => Outcome::fail(d),
        None => Outcome::new(true, format!("{n} checks, i exact ({el:.2?})")),
    }
}

fn c3_moments() -> Outcome {
    let (p, n) = (5, 4);
    let ctx = PrimeContext::new(p, n, 16).unwrap();
    for c in [PadicNum::from(2), PadicNum::from(7)] {
        let e = make_e1(&c, ctx).unwrap();
        for k in 1..=6u32 {
            let bi = box_integral(&e, &[0], 0, &Poly::monomial(vec![k - 1]), n).unwrap();
            let want = bernoulli(k) / PadicNum::from(k as i64) * (PadicNum::one() - c.pow(k));
            if !congruent(&bi.value, &want, p, bi.guarantee) {
                return Outcome::fail(format!("c={c} k={k}: {} vs {want} mod p^{}", bi.value, bi.guarantee));
            }
            if bi.guarantee < 1 {
                return Outcome::fail(format!("c={c} k={k}: vacuous guarantee {}", bi.guarantee));
            }
        }
    }
    Outcome::new(true, "k ≤ 6, c ∈ {2,7}, p = 5, n = 4")
}

fn c4_distributions() -> Outcome {
    let ctx = PrimeContext::new(3, 3, 16).unwrap();
    let c = PadicNum::from(7);
    let mut fams = vec![("dirac[2]".to_string(), make_dirac(&[2], ctx)), ("dirac[-5]".into(), make_dirac(&[-5], ctx))];
    for c in [c.clone(), PadicNum::from(-2), PadicNum::frac(1, 2), PadicNum::from(6)] {
        fams.push((format!("M({c})"), make_m(&c, ctx).unwrap()));
    }
    fams.push((format!("E1({c})"), make_e1(&c, ctx).unwrap()));
    fams.push((format!("N2({c})"), make_n2(&c, ctx).unwrap()));
    let g = FreeWord::parse("[x,y0]", 3, 2).unwrap();
    let (alpha, gamma) = alpha_gamma_tables(&g).unwrap();
    fams.push(("D2([x,y0])".into(), make_d2(&alpha, &gamma, ctx.with_n_max(2)).unwrap()));
    for (name, f) in &fams {
        if let Some(e) = f.validate().failure {
            return Outcome::fail(format!("{name}: defect {} at level {} point {:?}", e.defect, e.n, e.a));
        }
    }
    Outcome::new(true, format!("{} families", fams.len()))
}

fn grid() -> Vec<OctConfig> {
    GRID.iter().flat_map(|&(p, n)| OctConfig::all_units(p, n).unwrap()).collect()
}

fn c5_octagon() -> Outcome {
    let cfgs = grid();
    for cfg in &cfgs {
        let t = Instant::now();
        let tag = format!("(p,n,s)=({},{},{})", cfg.p, cfg.n, cfg.s);
        let prod = octagon_product(cfg);
        if !prod.coeff(&[padic_octagon::magnus::X]).is_zero() {
            return Outcome::fail(format!("{tag}: X coefficient nonzero"));
        }
        if prod.constant_term() != SymPoly::one() {
            return Outcome::fail(format!("{tag}: constant term {}", prod.constant_term()));
        }
        if !prop85_check(cfg).unwrap().pass {
            return Outcome::fail(format!("{tag}: prop85"));
        }
        let r = thm8x_check(cfg).unwrap();
        if let Some(res) = r.nonzero().next() {
            return Outcome::fail(format!("{tag}: {} residual at ({},{}) = {}", res.form, res.a, res.b, res.poly));
        }
        if !r.pass || !r.extra_relations_used.is_empty() {
            return Outcome::fail(format!("{tag}: needed {:?}", r.extra_relations_used));
        }
        if let Some(d) = limit(t.elapsed(), 60) {
            return Outcome::fail(format!("{tag}: {d}"));
        }
    }
    Outcome::new(true, format!("{} configurations, residuals exactly 0", cfgs.len()))
}

fn c6_derive() -> Outcome {
    let cfgs = grid();
    for cfg in &cfgs {
        for name in ['C', 'E', 'G'] {
            let d = derive_factor_by_subst(name, cfg).unwrap();
            if let Some(m) = d.mismatches.first() {
                return Outcome::fail(format!(
                    "{name} at ({},{},{}): {} display {} vs derived {}",
                    cfg.p, cfg.n, cfg.s, m.mono, m.display, m.derived
                ));
            }
        }
    }
    Outcome::new(true, format!("C, E, G on {} configurations", cfgs.len()))
}

fn c7_magnus() -> Outcome {
    let mut checks = 0;
    for (p, n_max) in [(2, 2), (3, 1)] {
        let cfg = SuiteConfig { p, n_max, degree: 3, seed: 7, ..SuiteConfig::default() };
        let r = suites::run("magnus", &cfg).unwrap();
        if let Some(f) = r.first_failure() {
            return Outcome::fail(f.text_line());
        }
        checks += r.checks.len();
    }
    Outcome::new(true, format!("{checks} checks over 10 seeded kernel words per configuration"))
}

fn c8_symmetry() -> Outcome {
    let p = 5;
    let ctx = PrimeContext::new(p, 2, 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for c in [PadicNum::from(2), PadicNum::from(7), PadicNum::frac(1, 3)] {
        assert!(is_unit(&c, p));
        let nu = DiracCombination::random(&mut rng, 1, 4, 30).symmetrize().to_family(ctx);
        let beta = beta_power(&synthetic_alpha(&nu, &c).unwrap(), 2).unwrap();
        let g = group_sum_check(&beta, &c, 2, 3).unwrap();
        if !g.pass || g.group_order != 8 {
            return Outcome::fail(format!("c={c}: group sum differs at {:?}", g.first_failure));
        }
        let t = transform_check(&beta, &c, 3, 2).unwrap();
        if let Some(m) = t.mismatches.first() {
            return Outcome::fail(format!("c={c}: transform coefficient {:?}: {} vs {}", m.exp, m.lhs, m.rhs));
        }
        if t.guarantee < 1 {
            return Outcome::fail(format!("c={c}: vacuous transform guarantee"));
        }
    }
    Outcome::new(true, "group sum mod p^3 at level 2; transform identity within guarantees")
}

fn c9_corrections() -> Outcome {
    let cfg = SuiteConfig { p: 3, seed: 9, ..SuiteConfig::default() };
    let r = suites::run("corrections", &cfg).unwrap();
    let relevant: Vec<_> = r
        .checks
        .iter()
        .filter(|c| ["negate", "one_minus", "shift_by_one", "four_term"].iter().any(|k| c.name.starts_with(&format!("corrections.{k}["))))
        .collect();
    if relevant.len() != 35 {
        return Outcome::fail(format!("expected 35 checks, found {}", relevant.len()));
    }
    match relevant.iter().find(|c| !c.pass) {
        Some(f) => Outcome::fail(f.text_line()),
        None => Outcome::new(true, "30 substitution checks and 5 four-term sums exact"),
    }
}

fn c10_tamper() -> Outcome {
    let expect = [
        ("measures", "dist.M[", "level 2 point [1]"),
        ("transforms", "iwasawa.M[c=7", "coefficient T^0"),
        ("magnus", "magnus.shuffle[", "word=0"),
        ("octagon", "octagon.thm8x[", "residual at (a,b) = (0,1)"),
        ("corrections", "corrections.four_term[", "measure=0"),
    ];
    for (suite, name, pin) in expect {
        let out = Command::new(env!("CARGO_BIN_EXE_padic-octagon"))
            .args(["verify", suite, "--p", "3", "--nmax", "3", "--tamper"])
            .output()
            .unwrap();
        let code = out.status.code();
        let text = String::from_utf8_lossy(&out.stdout);
        let first = text.lines().find(|l| l.starts_with("first failure:")).unwrap_or("");
        if code != Some(1) || !first.contains(name) || !first.contains(pin) {
            return Outcome::fail(format!("{suite}: exit {code:?}, {first:?}"));
        }
    }
    Outcome::new(true, "every suite exits 1 with the injected defect as first failure")
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("iwasawa transform of M(c)", c1_iwasawa),
        ("translation and reflection identities of E_1,c", c2_lemma82),
        ("E_1,c moments", c3_moments),
        ("distribution relations", c4_distributions),
        ("octagon symbolic suite", c5_octagon),
        ("factors from substitutions", c6_derive),
        ("magnus suite", c7_magnus),
        ("signed-permutation symmetrization", c8_symmetry),
        ("change-of-variable corrections", c9_corrections),
        ("negative controls", c10_tamper),
    ];
    let mut failed = vec![];
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} criterion {:>2} {name} :: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
