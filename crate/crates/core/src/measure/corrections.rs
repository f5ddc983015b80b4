//! Change-of-variable identities behind the corrected four-term relation.
//!
//! Everything is evaluated on finite Dirac combinations, where box integrals
//! are exact sums, so the identities are checked with no truncation at all.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{factorial, PadicNum};

use super::dirac::DiracCombination;
use super::integral::Poly;

/// Exponents (n_0, n_1, …, n_r) of the box integrand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shape(pub Vec<u32>);

impl Shape {
    pub fn new(ns: Vec<u32>) -> Result<Self> {
        if ns.len() < 2 {
            return Err(Error::InvalidInput("shape needs n_0 and n_r".into()));
        }
        Ok(Self(ns))
    }

    pub fn r(&self) -> usize {
        self.0.len() - 1
    }

    /// m = n_0 + … + n_r.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    fn sign(&self) -> PadicNum {
        PadicNum::from(if self.weight().is_multiple_of(2) { 1 } else { -1 })
    }

    /// All shapes of length r + 1 with weight ≤ w.
    pub fn all(r: usize, w: u32) -> Vec<Shape> {
        let mut out = vec![vec![]];
        for _ in 0..=r {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    let used: u32 = v.iter().sum();
                    (0..=w - used).map(move |k| {
                        let mut v = v.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Shape).collect()
    }
}

/// ((b_1 − x_1)/p^n + e)^{n_0} · Π_k ((x_k − x_{k+1} − b_k + b_{k+1})/p^n)^{n_k}
/// · ((x_r − b_r)/p^n − e)^{n_r}, with b read literally (not reduced).
pub fn integrand(shape: &Shape, b: &[i64], pn: u64, e: i64) -> Poly {
    let r = shape.r();
    assert_eq!(b.len(), r);
    let inv = PadicNum::frac(1, pn as i64);
    let q = |v: i64| PadicNum::from(v) * &inv;
    let ns = &shape.0;
    let first = Poly::affine(r, &[(0, -&inv)], q(b[0]) + PadicNum::from(e));
    let last = Poly::affine(r, &[(r - 1, inv.clone())], -q(b[r - 1]) - PadicNum::from(e));
    let mut poly = first.pow(ns[0]).mul(&last.pow(ns[r]));
    for k in 0..r - 1 {
        let f = Poly::affine(r, &[(k, inv.clone()), (k + 1, -&inv)], q(b[k + 1] - b[k]));
        poly = poly.mul(&f.pow(ns[k + 1]));
    }
    poly
}

fn box_term(beta: &DiracCombination, p: u64, n: u32, shape: &Shape, b: &[i64], e: i64) -> PadicNum {
    beta.box_integral(p, b, n, &integrand(shape, b, p.pow(n), e))
}

/// Both sides of one substitution identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sides {
    pub name: &'static str,
    pub lhs: PadicNum,
    pub rhs: PadicNum,
}

impl Sides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The substitutions y = −x, y = 1 − x and y = x − 1 applied to the box
/// integral over i + p^n Z_p^r.
pub fn change_of_variables(beta: &DiracCombination, p: u64, n: u32, shape: &Shape, i: &[i64]) -> Vec<Sides> {
    let r = shape.r();
    let pn = p.pow(n) as i64;
    let sign = shape.sign();
    let lhs = |maps: (i8, i64)| box_term(&beta.pushforward_affine(&vec![maps; r]), p, n, shape, i, 0);
    let shifted = |d: i64| -> Vec<i64> { i.iter().map(|&x| d - x).collect() };
    let minus_one: Vec<i64> = i.iter().map(|&x| x - 1).collect();
    vec![
        Sides { name: "negate", lhs: lhs((-1, 0)), rhs: &sign * &box_term(beta, p, n, shape, &shifted(pn), -1) },
        Sides { name: "one_minus", lhs: lhs((-1, 1)), rhs: &sign * &box_term(beta, p, n, shape, &shifted(pn + 1), -1) },
        Sides { name: "shift_by_one", lhs: lhs((1, 1)), rhs: box_term(beta, p, n, shape, &minus_one, 0) },
    ]
}

/// The four displayed integrals of the corrected relation, summed.
/// Zero whenever β − β(−x) + β(1−x) − β(x−1) vanishes, e.g. for even β.
pub fn four_term_sum(beta: &DiracCombination, p: u64, n: u32, shape: &Shape, i: &[i64]) -> PadicNum {
    let pn = p.pow(n) as i64;
    let sign = shape.sign();
    let b2: Vec<i64> = i.iter().map(|&x| pn - x).collect();
    let b3: Vec<i64> = i.iter().map(|&x| pn + 1 - x).collect();
    let b4: Vec<i64> = i.iter().map(|&x| x - 1).collect();
    box_term(beta, p, n, shape, i, 0) - &sign * &box_term(beta, p, n, shape, &b2, -1)
        + &sign * &box_term(beta, p, n, shape, &b3, -1)
        - box_term(beta, p, n, shape, &b4, 0)
}

/// λ_{w(a)} − (−1)^m λ_{w(−a)} + (−1)^m λ_{w(1−a)} − λ_{w(a−1)} for words
/// w(a) = Y_{a_1} X^{n_1} ⋯ X^{n_{r−1}} Y_{a_r}; indices reduced mod p^n.
pub fn lambda_combination(lambda: impl Fn(&[u64]) -> PadicNum, shape: &Shape, i: &[i64], pn: u64) -> PadicNum {
    let red = |f: &dyn Fn(i64) -> i64| -> Vec<u64> { i.iter().map(|&x| f(x).rem_euclid(pn as i64) as u64).collect() };
    let sign = shape.sign();
    lambda(&red(&|x| x)) - &sign * &lambda(&red(&|x| -x)) + &sign * &lambda(&red(&|x| 1 - x))
        - lambda(&red(&|x| x - 1))
}

/// λ read off a measure through the box-integral dictionary:
/// λ_{w(a)} = (Π n_k!)^{-1} ∫_{a + p^n Z_p^r} integrand dβ, with n_0 = n_r = 0.
pub fn dictionary_lambda<'a>(beta: &'a DiracCombination, p: u64, n: u32, shape: &'a Shape) -> impl Fn(&[u64]) -> PadicNum + 'a {
    let fact = shape.0.iter().fold(PadicNum::one(), |a, &k| a * PadicNum::from(factorial(k)));
    move |a: &[u64]| {
        let b: Vec<i64> = a.iter().map(|&x| x as i64).collect();
        box_term(beta, p, n, shape, &b, 0) / &fact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn integrand_in_box_coordinates() {
        // r = 1, n_0 = 1: (i − x)/p^n at x = i + 9 is −1
        let s = Shape::new(vec![1, 0]).unwrap();
        let f = integrand(&s, &[2], 9, 0);
        assert_eq!(f.eval(&[PadicNum::from(11)]), PadicNum::from(-1));
        let s = Shape::new(vec![0, 1, 0]).unwrap();
        let f = integrand(&s, &[1, 4], 3, 0);
        assert_eq!(f.eval(&[PadicNum::from(4), PadicNum::from(4)]), PadicNum::from(1));
        assert_eq!(Shape::all(2, 2).len(), 10);
    }

    #[test]
    fn substitutions_hold_for_any_measure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let beta = DiracCombination::random(&mut rng, 2, 6, 12);
            for shape in Shape::all(2, 2) {
                for i in [[0, 0], [1, 2], [2, 1]] {
                    for s in change_of_variables(&beta, 3, 1, &shape, &i) {
                        assert!(s.holds(), "{} {shape:?} {i:?}: {} vs {}", s.name, s.lhs, s.rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn four_terms_vanish_for_even_measures() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let beta = DiracCombination::random(&mut rng, 2, 5, 10).symmetrize();
        for shape in Shape::all(2, 2) {
            for i in [[0, 0], [1, 2], [2, 2]] {
                assert!(four_term_sum(&beta, 3, 1, &shape, &i).is_zero());
            }
        }
    }

    #[test]
    fn four_terms_detect_odd_measures() {
        let beta = DiracCombination::dirac(&[1, 2]);
        let s = Shape::new(vec![0, 0, 0]).unwrap();
        assert!(!four_term_sum(&beta, 3, 1, &s, &[1, 2]).is_zero());
    }

    #[test]
    fn lambda_relation_through_dictionary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let beta = DiracCombination::random(&mut rng, 2, 6, 20).symmetrize();
        let (p, n) = (5, 1);
        for n1 in 0..3 {
            let shape = Shape::new(vec![0, n1, 0]).unwrap();
            let lambda = dictionary_lambda(&beta, p, n, &shape);
            for i in [[2, 3], [4, 2], [3, 3]] {
                assert!(lambda_combination(&lambda, &shape, &i, 5).is_zero());
            }
        }
    }
}
