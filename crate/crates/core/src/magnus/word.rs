use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A generator of the level-n free group: x or y_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    X,
    Y(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub exp: i8,
}

impl Letter {
    fn inverse(self) -> Self {
        Self { gen: self.gen, exp: -self.exp }
    }
}

/// A freely reduced word in x, y_0..y_{p^n−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord {
    p: u64,
    level: u32,
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity(p: u64, level: u32) -> Self {
        Self { p, level, letters: vec![] }
    }

    pub fn from_letters(p: u64, level: u32, letters: Vec<Letter>) -> Result<Self> {
        let n = p.pow(level) as u32;
        if let Some(l) = letters.iter().find(|l| matches!(l.gen, Gen::Y(i) if i >= n)) {
            return Err(Error::IndexOutOfRange(format!("{:?} at level {level}", l.gen)));
        }
        if letters.iter().any(|l| l.exp != 1 && l.exp != -1) {
            return Err(Error::InvalidInput("letter exponents must be ±1".into()));
        }
        let mut w = Self { p, level, letters: vec![] };
        for l in letters {
            w.push(l);
        }
        Ok(w)
    }

    pub fn gen(p: u64, level: u32, g: Gen) -> Result<Self> {
        Self::from_letters(p, level, vec![Letter { gen: g, exp: 1 }])
    }

    pub fn x(p: u64, level: u32) -> Self {
        Self::gen(p, level, Gen::X).unwrap()
    }

    pub fn y(p: u64, level: u32, i: u32) -> Result<Self> {
        Self::gen(p, level, Gen::Y(i))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!((self.p, self.level), (o.p, o.level), "words from different levels");
        let mut w = self.clone();
        for &l in &o.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        Self { p: self.p, level: self.level, letters }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(self.p, self.level), |a, _| a.mul(&base))
    }

    /// [a,b] = a·b·a⁻¹·b⁻¹.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// g⁻¹·self·g.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.inverse().mul(self).mul(g)
    }

    pub fn x_exponent(&self) -> i64 {
        self.letters.iter().filter(|l| l.gen == Gen::X).map(|l| l.exp as i64).sum()
    }

    /// Total x-exponent zero: the word lies in every level subgroup.
    pub fn kernel_check(&self) -> bool {
        self.x_exponent() == 0
    }

    /// Image at level `target` ≤ level: x ↦ x^{p^m}, y_{i+kp^n} ↦ x^{−k} y_i x^{k}.
    pub fn project(&self, target: u32) -> Result<Self> {
        if target > self.level {
            return Err(Error::LevelOutOfRange { level: target, n_max: self.level });
        }
        let m = self.level - target;
        let pn = self.p.pow(target) as u32;
        let x = Self::x(self.p, target);
        let xpm = x.pow(self.p.pow(m) as i64);
        let mut out = Self::identity(self.p, target);
        for l in &self.letters {
            let img = match l.gen {
                Gen::X => xpm.clone(),
                Gen::Y(j) => {
                    let (i, k) = (j % pn, (j / pn) as i64);
                    Self::y(self.p, target, i)?.conjugate_by(&x.pow(k))
                }
            };
            out = out.mul(&if l.exp < 0 { img.inverse() } else { img });
        }
        Ok(out)
    }

    /// Parse `x`, `y3`, `^-1` (any integer power), `[a,b]`, parentheses, and
    /// concatenation by `*` or whitespace.
    pub fn parse(s: &str, p: u64, level: u32) -> Result<Self> {
        let mut parser = Parser { s: s.as_bytes(), pos: 0, p, level };
        let w = parser.word()?;
        parser.skip_ws();
        if parser.pos != parser.s.len() {
            return Err(parser.err("trailing input"));
        }
        Ok(w)
    }

    /// A random word with `len` letters and zero total x-exponent.
    pub fn random_kernel<R: Rng>(rng: &mut R, p: u64, level: u32, len: usize) -> Self {
        let n = p.pow(level) as u32;
        let mut letters = vec![];
        for _ in 0..len {
            let gen = if rng.gen_bool(0.35) { Gen::X } else { Gen::Y(rng.gen_range(0..n)) };
            let exp = if rng.gen_bool(0.5) { 1 } else { -1 };
            letters.push(Letter { gen, exp });
        }
        let mut w = Self::from_letters(p, level, letters).expect("indices in range");
        let e = w.x_exponent();
        w = w.mul(&Self::x(p, level).pow(-e));
        w
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                let g = match l.gen {
                    Gen::X => "x".to_string(),
                    Gen::Y(i) => format!("y{i}"),
                };
                if l.exp < 0 {
                    format!("{g}^-1")
                } else {
                    g
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    p: u64,
    level: u32,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<FreeWord> {
        let mut w = FreeWord::identity(self.p, self.level);
        loop {
            match self.peek() {
                Some(b'x' | b'y' | b'[' | b'(' | b'1') => w = w.mul(&self.factor()?),
                Some(b'*') => {
                    self.pos += 1;
                    if !matches!(self.peek(), Some(b'x' | b'y' | b'[' | b'(' | b'1')) {
                        return Err(self.err("expected a factor after '*'"));
                    }
                }
                _ => return Ok(w),
            }
        }
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected an integer"))
    }

    fn factor(&mut self) -> Result<FreeWord> {
        let base = match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                FreeWord::x(self.p, self.level)
            }
            Some(b'1') => {
                self.pos += 1;
                FreeWord::identity(self.p, self.level)
            }
            Some(b'y') => {
                self.pos += 1;
                if !self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.err("expected an index after 'y'"));
                }
                let i = self.number()?;
                let i = u32::try_from(i).map_err(|_| self.err("bad generator index"))?;
                FreeWord::y(self.p, self.level, i)?
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                if self.peek() != Some(b',') {
                    return Err(self.err("expected ','"));
                }
                self.pos += 1;
                let b = self.word()?;
                if self.peek() != Some(b']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                FreeWord::commutator(&a, &b)
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.word()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                a
            }
            _ => return Err(self.err("expected a generator")),
        };
        if self.s.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            let k = self.number()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        let w = FreeWord::parse("[x, y0]", 3, 1).unwrap();
        assert_eq!(w.to_string(), "x*y0*x^-1*y0^-1");
        let v = FreeWord::parse("y0^3 x y1 x^-1", 3, 1).unwrap();
        assert_eq!(v.to_string(), "y0*y0*y0*x*y1*x^-1");
        assert!(v.kernel_check());
        assert!(!FreeWord::parse("x", 3, 1).unwrap().kernel_check());
        assert!(FreeWord::parse("y0*y0^-1", 2, 1).unwrap().is_empty());
        assert!(FreeWord::parse("y3", 3, 1).is_err());
        assert!(FreeWord::parse("[x,y0", 3, 1).is_err());
        assert!(FreeWord::parse("z", 3, 1).is_err());
        assert!(FreeWord::parse("x *", 3, 1).is_err());
    }

    #[test]
    fn projections() {
        let y = FreeWord::y(3, 1, 0).unwrap();
        assert_eq!(y.project(0).unwrap(), FreeWord::y(3, 0, 0).unwrap());
        assert_eq!(FreeWord::x(3, 1).project(0).unwrap().to_string(), "x*x*x");
        let y4 = FreeWord::y(2, 2, 3).unwrap().project(1).unwrap();
        assert_eq!(y4.to_string(), "x^-1*y1*x");
        // projections compose
        let w = FreeWord::parse("[x,y3] y1 x^-2 y2 x^2", 2, 2).unwrap();
        assert_eq!(w.project(1).unwrap().project(0).unwrap(), w.project(0).unwrap());
    }

    #[test]
    fn random_words_are_kernel() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert!(FreeWord::random_kernel(&mut rng, 2, 2, 8).kernel_check());
        }
    }
}
