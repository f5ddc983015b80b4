//! Truncated noncommutative power series in X, Y_0..Y_{N−1}.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::padic::PadicNum;
use crate::ring::Coeff;

/// Letter code: 0 is X, i + 1 is Y_i.
pub type Sym = u16;
pub type Mono = Vec<Sym>;

pub const X: Sym = 0;

pub fn y(i: u32) -> Sym {
    (i + 1) as Sym
}

pub fn y_index(s: Sym) -> Option<u32> {
    (s != X).then(|| s as u32 - 1)
}

pub fn mono_string(m: &[Sym]) -> String {
    if m.is_empty() {
        return "1".into();
    }
    let parts: Vec<String> = m
        .iter()
        .map(|&s| match y_index(s) {
            None => "X".to_string(),
            Some(i) => format!("Y{i}"),
        })
        .collect();
    parts.join(".")
}

pub fn parse_mono(s: &str) -> Option<Mono> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Some(vec![]);
    }
    s.split('.')
        .map(|t| match t {
            "X" => Some(X),
            _ => t.strip_prefix('Y')?.parse::<u32>().ok().map(y),
        })
        .collect()
}

/// Σ c_w w over monomials of degree ≤ `degree`; higher terms are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C> {
    ngens: u32,
    degree: u32,
    terms: BTreeMap<Mono, C>,
}

pub type NcSeries = Series<PadicNum>;

impl<C: Coeff> Series<C> {
    pub fn zero(ngens: u32, degree: u32) -> Self {
        Self { ngens, degree, terms: BTreeMap::new() }
    }

    pub fn constant(ngens: u32, degree: u32, c: C) -> Self {
        let mut s = Self::zero(ngens, degree);
        s.add_term(vec![], c);
        s
    }

    pub fn one(ngens: u32, degree: u32) -> Self {
        Self::constant(ngens, degree, C::one())
    }

    pub fn letter(ngens: u32, degree: u32, s: Sym) -> Self {
        Self::monomial(ngens, degree, vec![s], C::one())
    }

    pub fn monomial(ngens: u32, degree: u32, m: Mono, c: C) -> Self {
        let mut s = Self::zero(ngens, degree);
        s.add_term(m, c);
        s
    }

    pub fn ngens(&self) -> u32 {
        self.ngens
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Mono, C> {
        &self.terms
    }

    pub fn coeff(&self, m: &[Sym]) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if m.len() as u32 > self.degree || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn with_degree(&self, degree: u32) -> Self {
        let mut s = Self::zero(self.ngens, degree);
        for (m, c) in &self.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.with_degree(self.degree.min(o.degree));
        for (m, c) in &o.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut s = Self::zero(self.ngens, self.degree);
        for (m, v) in &self.terms {
            s.add_term(m.clone(), v.mul(c));
        }
        s
    }

    pub fn scale_q(&self, q: &PadicNum) -> Self {
        self.scale(&C::from_q(q.clone()))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut s = Self::zero(self.ngens, self.degree);
        for (m, v) in &self.terms {
            s.add_term(m.clone(), f(v));
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.degree.min(o.degree);
        let mut s = Self::zero(self.ngens, d);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if (m1.len() + m2.len()) as u32 <= d {
                    let mut m = m1.clone();
                    m.extend_from_slice(m2);
                    s.add_term(m, c1.mul(c2));
                }
            }
        }
        s
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&[])
    }

    /// Homogeneous component of degree k.
    pub fn component(&self, k: u32) -> Self {
        let mut s = Self::zero(self.ngens, self.degree);
        for (m, c) in self.terms.iter().filter(|(m, _)| m.len() as u32 == k) {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    fn power_sum(&self, coeff: impl Fn(u32) -> PadicNum) -> Self {
        // Σ_k coeff(k)·self^k for a series without constant term
        let mut out = Self::constant(self.ngens, self.degree, C::from_q(coeff(0)));
        let mut pw = Self::one(self.ngens, self.degree);
        for k in 1..=self.degree {
            pw = pw.mul(self);
            if pw.terms.is_empty() {
                break;
            }
            out = out.add(&pw.scale_q(&coeff(k)));
        }
        out
    }

    fn without_constant(&self) -> Self {
        let mut s = self.clone();
        s.terms.remove(&vec![]);
        s
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.constant_term().is_zero(), "exp needs a zero constant term");
        self.power_sum(|k| PadicNum::from_int(crate::padic::factorial(k)).recip())
    }

    /// log of a series with constant term 1.
    pub fn log(&self) -> Self {
        assert!(self.constant_term() == C::one(), "log needs constant term 1");
        let t = self.without_constant();
        let mut s = t.power_sum(|k| {
            if k == 0 {
                PadicNum::zero()
            } else {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                PadicNum::frac(sign, k as i64)
            }
        });
        s.terms.remove(&vec![]);
        s
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse(&self) -> Self {
        assert!(self.constant_term() == C::one(), "inverse needs constant term 1");
        self.without_constant().neg().power_sum(|_| PadicNum::one())
    }

    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Algebra map sending each letter to `image(letter)`.
    pub fn substitute(&self, image: impl Fn(Sym) -> Self) -> Self {
        let mut cache: BTreeMap<Sym, Self> = BTreeMap::new();
        let mut out = Self::zero(self.ngens, self.degree);
        for (m, c) in &self.terms {
            let mut t = Self::constant(self.ngens, self.degree, c.clone());
            for &s in m {
                let img = cache.entry(s).or_insert_with(|| image(s).with_degree(self.degree));
                t = t.mul(img);
            }
            out = out.add(&t);
        }
        out
    }

    /// E⁰: drop every monomial containing X.
    pub fn specialize_x0(&self) -> Self {
        let mut s = Self::zero(self.ngens, self.degree);
        for (m, c) in self.terms.iter().filter(|(m, _)| !m.contains(&X)) {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json_with(&self, level: u32, fmt: impl Fn(&C) -> String) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({"mono": mono_string(m), "value": fmt(c)}))
            .collect();
        json!({"level": level, "degree": self.degree, "terms": terms})
    }
}

impl NcSeries {
    pub fn to_json(&self, level: u32) -> Value {
        self.to_json_with(level, |c| c.to_string())
    }

    /// Left-normed Dynkin bracketing θ(w) = [..[w_1,w_2],..,w_k].
    fn dynkin_mono(&self, m: &[Sym]) -> Self {
        let mut s = Self::letter(self.ngens, self.degree, m[0]);
        for &l in &m[1..] {
            s = s.bracket(&Self::letter(self.ngens, self.degree, l));
        }
        s
    }

    /// Dynkin–Specht–Wever: a homogeneous L_k is Lie iff θ(L_k) = k·L_k.
    pub fn is_lie(&self) -> bool {
        if !self.constant_term().is_zero() {
            return false;
        }
        (1..=self.degree).all(|k| {
            let lk = self.component(k);
            let mut th = Self::zero(self.ngens, self.degree);
            for (m, c) in lk.terms() {
                th = th.add(&self.dynkin_mono(m).scale(c));
            }
            th == lk.scale(&PadicNum::from_int(k))
        })
    }
}

/// All interleavings of u and v, with multiplicity.
pub fn shuffle(u: &[Sym], v: &[Sym]) -> BTreeMap<Mono, u64> {
    let mut out = BTreeMap::new();
    fn rec(u: &[Sym], v: &[Sym], acc: &mut Mono, out: &mut BTreeMap<Mono, u64>) {
        if u.is_empty() && v.is_empty() {
            *out.entry(acc.clone()).or_insert(0) += 1;
            return;
        }
        if let Some((&a, rest)) = u.split_first() {
            acc.push(a);
            rec(rest, v, acc, out);
            acc.pop();
        }
        if let Some((&b, rest)) = v.split_first() {
            acc.push(b);
            rec(u, rest, acc, out);
            acc.pop();
        }
    }
    rec(u, v, &mut vec![], &mut out);
    out
}
