use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use padic_octagon::classical::{make_d2, make_dirac, make_e1, make_m, make_n2};
use padic_octagon::magnus::{alpha_gamma_tables, embed_e, FreeWord};
use padic_octagon::measure::{iwasawa_p, transform_f, IwasawaPoly, LevelFamily};
use padic_octagon::octagon::{build_factor, OctConfig};
use padic_octagon::padic::parse_integral;
use padic_octagon::suites::{self, SuiteConfig};
use padic_octagon::{Error, PadicNum, PrimeContext};

#[derive(Parser)]
#[command(name = "padic-octagon", version, about = "Exact p-adic measures and octagon-relation verifier")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite: octagon, measures, magnus, transforms, corrections or all.
    Verify {
        suite: String,
        #[command(flatten)]
        opts: Opts,
        /// Inject one known defect (negative control).
        #[arg(long)]
        tamper: bool,
    },
    /// Serialize a constructed object.
    Emit {
        #[arg(value_enum)]
        object: Object,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Object {
    Measure,
    Iwasawa,
    #[value(name = "F-series")]
    FSeries,
    NcSeries,
    OctagonFactor,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureKind {
    #[value(name = "dirac")]
    Dirac,
    #[value(name = "M")]
    M,
    #[value(name = "E1")]
    E1,
    #[value(name = "N2")]
    N2,
    #[value(name = "D2")]
    D2,
}

#[derive(Args)]
struct Opts {
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long = "nmax", default_value_t = 3)]
    n_max: u32,
    /// Octagon / word level.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Unit residue s of the character χ = s + p^n·t; all units if absent.
    #[arg(long)]
    sigma_rep: Option<u64>,
    #[arg(long, default_value_t = 3)]
    degree: u32,
    #[arg(long, default_value_t = 6)]
    terms: u32,
    #[arg(long, default_value_t = 4)]
    level: u32,
    #[arg(long, default_value_t = 3)]
    mod_exp: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    word: Option<String>,
    #[arg(long, value_enum, default_value_t = MeasureKind::Dirac)]
    measure: MeasureKind,
    /// Rational parameter "num/den".
    #[arg(long)]
    c: Option<String>,
    /// Dirac point(s), comma separated.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Octagon factor letter A..J.
    #[arg(long, default_value = "A")]
    factor: char,
}

impl Opts {
    fn suite_config(&self, tamper: bool) -> SuiteConfig {
        SuiteConfig {
            p: self.p,
            n_max: self.n_max,
            n: self.n,
            sigma_rep: self.sigma_rep,
            degree: self.degree,
            terms: self.terms,
            level: self.level,
            mod_exp: self.mod_exp,
            seed: self.seed,
            tamper,
        }
    }

    fn c(&self) -> Result<PadicNum, Error> {
        parse_integral(self.c.as_deref().ok_or_else(|| Error::InvalidInput("--c is required".into()))?, self.p)
    }

    fn word(&self, level: u32) -> Result<FreeWord, Error> {
        let w = self.word.as_deref().ok_or_else(|| Error::InvalidInput("--word is required".into()))?;
        FreeWord::parse(w, self.p, level)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Verify { suite, opts, tamper } => verify(suite, opts, *tamper),
        Cmd::Emit { object, opts } => emit(*object, opts).map(|s| (s, true)),
    };
    match res {
        Ok((text, pass)) => {
            let out = match &cli.cmd {
                Cmd::Verify { opts, .. } | Cmd::Emit { opts, .. } => opts.out.as_deref(),
            };
            if let Err(e) = write_out(out, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Cmd::Verify { .. } = cli.cmd {
                eprintln!("usage: padic-octagon verify <{}|all> [options]", suites::SUITES.join("|"));
            }
            ExitCode::from(2)
        }
    }
}

fn write_out(path: Option<&str>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn verify(suite: &str, opts: &Opts, tamper: bool) -> Result<(String, bool), Error> {
    let rep = suites::run(suite, &opts.suite_config(tamper))?;
    let text = match opts.format {
        Format::Json => {
            let v = json!({"config": opts.suite_config(tamper), "report": rep, "passed": rep.passed()});
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("suite,check,pass,detail\n");
            for c in &rep.checks {
                s.push_str(&format!("{},{},{},{}\n", rep.suite, csv_field(&c.name), c.pass, csv_field(&c.detail)));
            }
            s
        }
        Format::Text => {
            let mut s = rep.to_text();
            if let Some(f) = rep.first_failure() {
                s.push_str(&format!("first failure: {}\n", f.text_line()));
            }
            s
        }
    };
    Ok((text, rep.passed()))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn build_measure(opts: &Opts, n_max: u32) -> Result<(String, LevelFamily), Error> {
    let ctx = PrimeContext::new(opts.p, n_max, 16)?;
    Ok(match opts.measure {
        MeasureKind::Dirac => {
            let a = opts.a.as_deref().unwrap_or("0");
            let pts: Vec<i64> = a
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad --a {a:?}"))))
                .collect::<Result<_, _>>()?;
            (format!("dirac[{a}]"), make_dirac(&pts, ctx))
        }
        MeasureKind::M => (format!("M[{}]", opts.c()?), make_m(&opts.c()?, ctx)?),
        MeasureKind::E1 => (format!("E1[{}]", opts.c()?), make_e1(&opts.c()?, ctx)?),
        MeasureKind::N2 => (format!("N2[{}]", opts.c()?), make_n2(&opts.c()?, ctx)?),
        MeasureKind::D2 => {
            let g = opts.word(n_max)?;
            let (alpha, gamma) = alpha_gamma_tables(&g)?;
            (format!("D2[{g}]"), make_d2(&alpha, &gamma, ctx)?)
        }
    })
}

fn emit(object: Object, opts: &Opts) -> Result<String, Error> {
    let f = opts.format;
    match object {
        Object::Measure => {
            let (name, mu) = build_measure(opts, opts.n_max)?;
            Ok(match f {
                Format::Csv => mu.to_csv(),
                Format::Json => {
                    let levels: Vec<Value> = (0..=opts.n_max)
                        .map(|n| {
                            let vals: Vec<Value> = mu
                                .level_points(n)
                                .zip(mu.table(n))
                                .map(|(a, v)| json!({"a": a, "value": v.to_string()}))
                                .collect();
                            json!({"n": n, "values": vals})
                        })
                        .collect();
                    let v = json!({"measure": name, "p": opts.p, "n_max": opts.n_max, "dim": mu.dim(), "levels": levels});
                    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
                }
                Format::Text => {
                    let mut s = format!("{name} p={} n_max={}\n", opts.p, opts.n_max);
                    for n in 0..=opts.n_max {
                        for (a, v) in mu.level_points(n).zip(mu.table(n)) {
                            s.push_str(&format!("n={n} a={a:?} {v}\n"));
                        }
                    }
                    s
                }
            })
        }
        Object::Iwasawa | Object::FSeries => {
            let (name, mu) = build_measure(opts, opts.level)?;
            let poly = match object {
                Object::Iwasawa => iwasawa_p(&mu, opts.terms, opts.level)?,
                _ => transform_f(&mu, opts.terms, opts.level)?,
            };
            Ok(series_out(&name, &poly, f))
        }
        Object::NcSeries => {
            let g = opts.word(opts.n)?;
            let s = embed_e(&g, opts.degree);
            Ok(nc_out(s.to_json(opts.n), f))
        }
        Object::OctagonFactor => {
            let s = opts.sigma_rep.unwrap_or(1);
            let cfg = OctConfig::new(opts.p, opts.n, s)?;
            let name = opts.factor.to_ascii_uppercase();
            if !('A'..='J').contains(&name) {
                return Err(Error::InvalidInput(format!("unknown factor {name:?}; expected A..J")));
            }
            let series = build_factor(name, &cfg);
            let mut v = series.to_json_with(opts.n, |c| c.to_string());
            v["factor"] = json!(name.to_string());
            v["s"] = json!(s);
            Ok(nc_out(v, f))
        }
    }
}

fn series_out(name: &str, poly: &IwasawaPoly, f: Format) -> String {
    match f {
        Format::Json => {
            let mut v = serde_json::to_value(poly).expect("serializable");
            v["measure"] = json!(name);
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("exp,value,guarantee\n");
            for c in &poly.coeffs {
                let e: Vec<String> = c.exp.iter().map(u32::to_string).collect();
                s.push_str(&format!("{},{},{}\n", e.join(" "), c.value, c.guarantee));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{name}\n");
            for c in &poly.coeffs {
                s.push_str(&format!("{:?}: {} (mod p^{})\n", c.exp, c.value, c.guarantee));
            }
            s
        }
    }
}

fn nc_out(v: Value, f: Format) -> String {
    let terms = v["terms"].as_array().cloned().unwrap_or_default();
    match f {
        Format::Json => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
        Format::Csv => {
            let mut s = String::from("mono,value\n");
            for t in terms {
                s.push_str(&format!("{},{}\n", csv_field(t["mono"].as_str().unwrap_or("")), csv_field(t["value"].as_str().unwrap_or(""))));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for t in terms {
                s.push_str(&format!("{}: {}\n", t["mono"].as_str().unwrap_or(""), t["value"].as_str().unwrap_or("")));
            }
            s
        }
    }
}
