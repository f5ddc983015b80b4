use std::collections::BTreeMap;
use std::fmt;

use crate::padic::PadicNum;
use crate::ring::Coeff;

/// A formal coefficient: α_i, β_{a,b}, γ_i (indices mod p^n) or t = (χ − s)/p^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymId {
    Alpha(u32),
    Beta(u32, u32),
    Gamma(u32),
    T,
}

impl fmt::Display for SymId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymId::Alpha(i) => write!(f, "a_{i}"),
            SymId::Beta(a, b) => write!(f, "b_{{{a},{b}}}"),
            SymId::Gamma(i) => write!(f, "g_{i}"),
            SymId::T => write!(f, "t"),
        }
    }
}

/// Commutative polynomial over Q in the symbols; keys are sorted multisets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymPoly {
    terms: BTreeMap<Vec<SymId>, PadicNum>,
}

impl SymPoly {
    pub fn constant(c: PadicNum) -> Self {
        let mut s = Self::default();
        s.add_term(vec![], c);
        s
    }

    pub fn int(c: i64) -> Self {
        Self::constant(PadicNum::from(c))
    }

    pub fn sym(s: SymId) -> Self {
        let mut p = Self::default();
        p.add_term(vec![s], PadicNum::one());
        p
    }

    pub fn t() -> Self {
        Self::sym(SymId::T)
    }

    pub fn terms(&self) -> &BTreeMap<Vec<SymId>, PadicNum> {
        &self.terms
    }

    pub fn add_term(&mut self, mut mono: Vec<SymId>, c: PadicNum) {
        if c.is_zero() {
            return;
        }
        mono.sort();
        let e = self.terms.entry(mono).or_insert_with(PadicNum::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Symbols other than t, each once.
    pub fn symbols(&self) -> Vec<SymId> {
        let mut v: Vec<SymId> = self.terms.keys().flatten().copied().filter(|&s| s != SymId::T).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Degree counting only α, β, γ.
    pub fn sym_degree(&self) -> usize {
        self.terms.keys().map(|m| m.iter().filter(|&&s| s != SymId::T).count()).max().unwrap_or(0)
    }

    pub fn constant_value(&self) -> Option<PadicNum> {
        match self.terms.len() {
            0 => Some(PadicNum::zero()),
            1 => self.terms.get(&vec![]).cloned(),
            _ => None,
        }
    }

    /// If `s` enters only linearly with t-free coefficient: (coefficient, rest).
    pub fn linear_in(&self, s: SymId) -> Option<(PadicNum, SymPoly)> {
        let mut coeff = None;
        let mut rest = SymPoly::default();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|&&x| x == s).count();
            match k {
                0 => rest.add_term(m.clone(), c.clone()),
                1 if m.len() == 1 => coeff = Some(c.clone()),
                _ => return None,
            }
        }
        coeff.map(|c| (c, rest))
    }

    /// Replaces symbols by polynomials.
    pub fn substitute(&self, map: &BTreeMap<SymId, SymPoly>) -> SymPoly {
        let mut out = SymPoly::default();
        for (m, c) in &self.terms {
            if !m.iter().any(|s| map.contains_key(s)) {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let mut t = SymPoly::constant(c.clone());
            for s in m {
                t = match map.get(s) {
                    Some(p) => Coeff::mul(&t, p),
                    None => Coeff::mul(&t, &SymPoly::sym(*s)),
                };
            }
            out = Coeff::add(&out, &t);
        }
        out
    }

    /// Sets t to a rational value.
    pub fn eval_t(&self, t: &PadicNum) -> SymPoly {
        let mut out = SymPoly::default();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|&&s| s == SymId::T).count() as u32;
            let rest: Vec<SymId> = m.iter().copied().filter(|&s| s != SymId::T).collect();
            out.add_term(rest, c * &t.pow(k));
        }
        out
    }
}

impl Coeff for SymPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (m, c) in &o.terms {
            let e = s.terms.entry(m.clone()).or_insert_with(PadicNum::zero);
            *e += c;
        }
        s.terms.retain(|_, v| !v.is_zero());
        s
    }
    fn mul(&self, o: &Self) -> Self {
        let mut s = SymPoly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                s.add_term(m, c1 * c2);
            }
        }
        s
    }
    fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_q(q: PadicNum) -> Self {
        Self::constant(q)
    }
    fn scale(&self, q: &PadicNum) -> Self {
        if q.is_zero() {
            return Self::default();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut factors = vec![c.to_string()];
                let mut i = 0;
                while i < m.len() {
                    let k = m[i..].iter().take_while(|&&s| s == m[i]).count();
                    factors.push(if k == 1 { m[i].to_string() } else { format!("{}^{k}", m[i]) });
                    i += k;
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a1 = SymPoly::sym(SymId::Alpha(1));
        let t = SymPoly::t();
        let p = Coeff::mul(&Coeff::add(&a1, &t), &Coeff::sub(&a1, &t));
        assert_eq!(p.to_string(), "1*a_1^2 + -1*t^2");
        assert_eq!(SymPoly::sym(SymId::Beta(0, 2)).to_string(), "1*b_{0,2}");
        assert!(Coeff::sub(&p, &p).is_zero());
        assert_eq!(p.sym_degree(), 2);
        assert_eq!(p.eval_t(&PadicNum::from(2)).to_string(), "-4 + 1*a_1^2");
    }

    #[test]
    fn substitution_and_linearity() {
        let a1 = SymId::Alpha(1);
        let q = Coeff::add(&SymPoly::sym(a1).scale(&PadicNum::from(3)), &SymPoly::t());
        let (c, rest) = q.linear_in(a1).unwrap();
        assert_eq!(c, PadicNum::from(3));
        assert_eq!(rest, SymPoly::t());
        assert!(Coeff::mul(&SymPoly::sym(a1), &SymPoly::t()).linear_in(a1).is_none());
        let map = BTreeMap::from([(a1, SymPoly::int(2))]);
        assert_eq!(q.substitute(&map), Coeff::add(&SymPoly::int(6), &SymPoly::t()));
    }
}
