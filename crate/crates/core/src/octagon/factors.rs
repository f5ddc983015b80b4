//! The nine factors A..J at level n, written out term by term.
//!
//! χ = s + p^n·t with s the fixed residue; indices are read mod p^n, so an
//! index p^n is Y_0. Empty sums vanish.

use crate::magnus::{y, Series, Sym, X};
use crate::padic::PadicNum;
use crate::ring::Coeff;

use super::sym::{SymId, SymPoly};
use super::OctConfig;

pub type SymSeries = Series<SymPoly>;

pub const FACTOR_NAMES: [char; 9] = ['A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'J'];

struct Builder<'a> {
    cfg: &'a OctConfig,
    s: SymSeries,
}

impl<'a> Builder<'a> {
    fn new(cfg: &'a OctConfig) -> Self {
        Self { cfg, s: SymSeries::one(cfg.pn() as u32, 2) }
    }

    fn y(&self, i: i64) -> Sym {
        y(self.cfg.idx(i))
    }

    fn term(&mut self, m: Vec<Sym>, c: SymPoly) {
        self.s.add_term(m, c);
    }

    fn yi(&mut self, i: i64, c: SymPoly) {
        let m = vec![self.y(i)];
        self.term(m, c);
    }

    fn yy(&mut self, a: i64, b: i64, c: SymPoly) {
        let m = vec![self.y(a), self.y(b)];
        self.term(m, c);
    }

    fn xy(&mut self, i: i64, c: SymPoly) {
        let m = vec![X, self.y(i)];
        self.term(m, c);
    }

    fn yx(&mut self, i: i64, c: SymPoly) {
        let m = vec![self.y(i), X];
        self.term(m, c);
    }
}

fn q(n: i64, d: i64) -> PadicNum {
    PadicNum::frac(n, d)
}

impl OctConfig {
    pub fn alpha(&self, i: i64) -> SymPoly {
        SymPoly::sym(SymId::Alpha(self.idx(i)))
    }

    pub fn beta(&self, a: i64, b: i64) -> SymPoly {
        SymPoly::sym(SymId::Beta(self.idx(a), self.idx(b)))
    }

    pub fn gamma(&self, i: i64) -> SymPoly {
        SymPoly::sym(SymId::Gamma(self.idx(i)))
    }

    /// χ = s + p^n·t.
    pub fn chi(&self) -> SymPoly {
        SymPoly::int(self.s as i64).add(&SymPoly::t().scale(&PadicNum::from(self.pn() as i64)))
    }

    /// u = (1 − χ)/2.
    pub fn u(&self) -> SymPoly {
        SymPoly::int(1).sub(&self.chi()).scale(&q(1, 2))
    }
}

pub fn build_factor(name: char, cfg: &OctConfig) -> SymSeries {
    let n = cfg.pn() as i64;
    let s = cfg.s as i64;
    let t = SymPoly::t();
    let u = cfg.u();
    let half = q(1, 2);
    let mut b = Builder::new(cfg);
    match name {
        'A' => {
            for i in 0..n {
                b.yi(i, cfg.alpha(i));
                b.xy(i, cfg.gamma(i));
                b.yx(i, cfg.gamma(i).neg());
                for j in 0..n {
                    b.yy(i, j, cfg.beta(i, j));
                }
            }
        }
        'B' => {
            b.yi(0, u.clone());
            b.yy(0, 0, u.mul(&u).scale(&half));
        }
        'C' => {
            // y_0 is fixed by the path conjugation, so the X-sums start at i = 1
            for i in 0..n {
                let a = cfg.alpha(n - i);
                b.yi(i, a.neg());
                if i > 0 {
                    b.xy(i, a.neg());
                    b.yx(i, a);
                }
            }
            for bb in 1..n {
                for a in bb + 1..=n {
                    b.yy(a, bb, cfg.alpha(n - bb).neg());
                }
            }
            for a in 1..n {
                for bb in a + 1..=n {
                    b.yy(a, bb, cfg.alpha(n - a));
                }
            }
            for a in 0..n {
                b.xy(a, cfg.gamma(-a));
                b.yx(a, cfg.gamma(-a).neg());
                for bb in 0..n {
                    b.yy(a, bb, cfg.beta(-a, -bb).neg());
                    b.yy(a, bb, cfg.gamma(-bb));
                    b.yy(a, bb, cfg.gamma(-a).neg());
                    b.yy(a, bb, cfg.alpha(n - a).mul(&cfg.alpha(n - bb)));
                }
            }
        }
        'D' => {
            b.term(vec![X], t.clone());
            let th = t.scale(&half);
            let tt = t.mul(&t).scale(&half);
            b.yx(0, th.clone());
            b.xy(0, th.neg());
            for i in 0..n {
                b.yi(i, t.clone());
                b.xy(i, th.clone());
                b.yx(i, th.neg());
                b.xy(i, tt.clone());
                b.yx(i, tt.clone());
                for j in 0..n {
                    b.yy(i, j, tt.clone());
                }
            }
            for lo in 1..=n {
                for hi in lo + 1..=n {
                    b.yy(hi, lo, th.clone());
                    b.yy(lo, hi, th.neg());
                }
            }
        }
        'E' => {
            for a in 1..=s {
                let c = cfg.alpha(s - a);
                b.yi(a, c.clone());
                for j in 1..a {
                    b.yy(a, j, c.clone());
                    b.yy(j, a, c.neg());
                }
            }
            b.yi(0, cfg.alpha(s));
            for a in s + 1..n {
                let c = cfg.alpha(s - a);
                b.yi(a, c.clone());
                b.yx(a, c.neg());
                b.xy(a, c.clone());
                for j in a + 1..=n {
                    b.yy(a, j, c.neg());
                    b.yy(j, a, c.clone());
                }
            }
            for j in 0..n {
                let g = cfg.gamma(s - j);
                b.xy(j, g.neg());
                b.yx(j, g.clone());
                for k in 0..n {
                    b.yy(k, j, g.neg());
                    b.yy(j, k, g.clone());
                    b.yy(j, k, cfg.beta(s - j, s - k));
                }
            }
        }
        'F' => {
            b.yi(s, u.clone());
            b.yy(s, s, u.mul(&u).scale(&half));
            for i in 1..s {
                b.yy(s, i, u.clone());
                b.yy(i, s, u.neg());
            }
        }
        'G' => {
            for i in 0..n {
                let c = cfg.alpha(i - s);
                b.yi(i, c.neg());
                for j in 1..s {
                    b.yy(i, j, c.neg());
                    b.yy(j, i, c.clone());
                }
                if i < s {
                    b.yx(i, c.neg());
                    b.xy(i, c.clone());
                }
                b.xy(i, cfg.gamma(i - s).neg());
                b.yx(i, cfg.gamma(i - s));
                for j in 0..n {
                    b.yy(i, j, cfg.beta(i - s, j - s).neg());
                    b.yy(i, j, c.mul(&cfg.alpha(j - s)));
                }
            }
        }
        'H' => {
            b.term(vec![X], t.neg());
            b.term(vec![X, X], t.mul(&t).scale(&half));
            for i in 1..s {
                b.xy(i, t.clone());
                b.yx(i, t.neg());
            }
        }
        'J' => {
            let one = SymPoly::int(1);
            for i in 1..s {
                b.yi(i, one.clone());
                for j in 1..s {
                    b.yy(i, j, one.scale(&half));
                    if j < i {
                        b.yy(i, j, one.scale(&half));
                        b.yy(j, i, one.scale(&q(-1, 2)));
                    }
                }
            }
        }
        _ => panic!("unknown factor {name}"),
    }
    b.s
}

/// J·H·G·F·E·D·C·B·A, truncated past degree 2.
pub fn octagon_product(cfg: &OctConfig) -> SymSeries {
    let mut acc = SymSeries::one(cfg.pn() as u32, 2);
    for name in ['J', 'H', 'G', 'F', 'E', 'D', 'C', 'B', 'A'] {
        acc = acc.mul(&build_factor(name, cfg));
    }
    acc
}

pub fn series_inverse(s: &SymSeries) -> SymSeries {
    s.inverse()
}
