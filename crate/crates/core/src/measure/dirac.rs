//! Finite combinations of Dirac masses at integer points. Integrals against
//! them are exact, so change-of-variable identities can be tested with no
//! truncation error at all.

use std::collections::BTreeMap;

use rand::Rng;

use crate::padic::{PadicNum, PrimeContext};

use super::integral::Poly;
use super::LevelFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracCombination {
    dim: usize,
    atoms: BTreeMap<Vec<i64>, PadicNum>,
}

impl DiracCombination {
    pub fn new(dim: usize) -> Self {
        Self { dim, atoms: BTreeMap::new() }
    }

    pub fn dirac(a: &[i64]) -> Self {
        let mut d = Self::new(a.len());
        d.add_mass(a.to_vec(), PadicNum::one());
        d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Vec<i64>, &PadicNum)> {
        self.atoms.iter()
    }

    pub fn add_mass(&mut self, at: Vec<i64>, m: PadicNum) {
        assert_eq!(at.len(), self.dim);
        let slot = self.atoms.entry(at.clone()).or_insert_with(PadicNum::zero);
        *slot += &m;
        if slot.is_zero() {
            self.atoms.remove(&at);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (a, m) in &o.atoms {
            out.add_mass(a.clone(), m.clone());
        }
        out
    }

    pub fn scale(&self, c: &PadicNum) -> Self {
        let mut out = Self::new(self.dim);
        for (a, m) in &self.atoms {
            out.add_mass(a.clone(), m * c);
        }
        out
    }

    /// Pushforward along x ↦ (ε_k x_k + c_k).
    pub fn pushforward_affine(&self, maps: &[(i8, i64)]) -> Self {
        let mut out = Self::new(self.dim);
        for (a, m) in &self.atoms {
            let b = a.iter().zip(maps).map(|(&x, &(e, c))| e as i64 * x + c).collect();
            out.add_mass(b, m.clone());
        }
        out
    }

    /// β∘(−1).
    pub fn reflect(&self) -> Self {
        self.pushforward_affine(&vec![(-1, 0); self.dim])
    }

    /// γ + γ∘(−1): an even measure.
    pub fn symmetrize(&self) -> Self {
        self.add(&self.reflect())
    }

    /// Exact ∫_{base + p^n Z_p^r} poly dβ.
    pub fn box_integral(&self, p: u64, base: &[i64], n: u32, poly: &Poly) -> PadicNum {
        let pn = p.pow(n) as i64;
        self.atoms
            .iter()
            .filter(|(a, _)| a.iter().zip(base).all(|(&x, &b)| (x - b).rem_euclid(pn) == 0))
            .map(|(a, m)| {
                let x: Vec<PadicNum> = a.iter().map(|&v| PadicNum::from(v)).collect();
                poly.eval(&x) * m
            })
            .sum()
    }

    pub fn to_family(&self, ctx: PrimeContext) -> LevelFamily {
        LevelFamily::from_fn(ctx, self.dim, |n, b| {
            let pn = ctx.pn(n) as i64;
            self.atoms
                .iter()
                .filter(|(a, _)| a.iter().zip(b).all(|(&x, &y)| x.rem_euclid(pn) as u64 == y))
                .map(|(_, m)| m.clone())
                .sum()
        })
    }

    /// `atoms` random masses in [-5, 5] at points in [-span, span]^dim.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, atoms: usize, span: i64) -> Self {
        let mut out = Self::new(dim);
        while out.atoms.len() < atoms {
            let a: Vec<i64> = (0..dim).map(|_| rng.gen_range(-span..=span)).collect();
            let m = rng.gen_range(-5i64..=5);
            if m != 0 {
                out.add_mass(a, PadicNum::from(m));
            }
        }
        out
    }
}
