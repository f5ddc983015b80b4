use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::Coeff;

use super::sym::{SymId, SymPoly};

/// Relations r = 0, triangularized into a substitution symbol ↦ polynomial whose
/// right-hand sides never mention an eliminated symbol.
#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    relations: Vec<SymPoly>,
    subst: BTreeMap<SymId, SymPoly>,
    /// Relations that reduced to something with no usable pivot.
    stuck: Vec<SymPoly>,
}

impl RelationSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_relations(rels: impl IntoIterator<Item = SymPoly>) -> Result<Self> {
        let mut r = Self::new();
        r.extend(rels)?;
        Ok(r)
    }

    pub fn relations(&self) -> &[SymPoly] {
        &self.relations
    }

    pub fn substitution(&self) -> &BTreeMap<SymId, SymPoly> {
        &self.subst
    }

    pub fn rank(&self) -> usize {
        self.subst.len()
    }

    pub fn stuck(&self) -> &[SymPoly] {
        &self.stuck
    }

    pub fn extend(&mut self, rels: impl IntoIterator<Item = SymPoly>) -> Result<()> {
        for r in rels {
            self.push(r)?;
        }
        Ok(())
    }

    /// Adds one relation; the pivot is the largest symbol entering linearly with a
    /// t-free coefficient.
    pub fn push(&mut self, rel: SymPoly) -> Result<()> {
        self.relations.push(rel.clone());
        let r = self.reduce(&rel);
        if r.is_zero() {
            return Ok(());
        }
        if r.symbols().is_empty() {
            return Err(Error::Inconsistent(format!("relation reduces to {r} = 0")));
        }
        let pivot = r.symbols().into_iter().rev().find_map(|s| r.linear_in(s).map(|lr| (s, lr)));
        let Some((sym, (c, rest))) = pivot else {
            self.stuck.push(r);
            return Ok(());
        };
        let value = rest.scale(&(-c.recip()));
        let one = BTreeMap::from([(sym, value.clone())]);
        for v in self.subst.values_mut() {
            *v = v.substitute(&one);
        }
        self.subst.insert(sym, value);
        Ok(())
    }

    /// Canonical remainder: every eliminated symbol replaced.
    pub fn reduce(&self, q: &SymPoly) -> SymPoly {
        q.substitute(&self.subst)
    }
}

/// Shuffle relation β_{a,b} + β_{b,a} − α_a·α_b.
pub fn shuffle_relation(a: u32, b: u32) -> SymPoly {
    let ab = SymPoly::sym(SymId::Beta(a, b));
    let ba = SymPoly::sym(SymId::Beta(b, a));
    let aa = SymPoly::sym(SymId::Alpha(a)).mul(&SymPoly::sym(SymId::Alpha(b)));
    ab.add(&ba).sub(&aa)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u32) -> SymPoly {
        SymPoly::sym(SymId::Alpha(i))
    }

    #[test]
    fn triangular_reduction() {
        let rels = RelationSet::from_relations([a(2).sub(&a(1)), a(1).sub(&SymPoly::t())]).unwrap();
        assert_eq!(rels.rank(), 2);
        assert_eq!(rels.reduce(&a(2)), SymPoly::t());
        assert!(rels.reduce(&a(2).sub(&a(1))).is_zero());
        let r = rels.reduce(&a(0).mul(&a(2)));
        assert_eq!(rels.reduce(&r), r);
        for rel in rels.relations() {
            assert!(rels.reduce(rel).is_zero());
        }
    }

    #[test]
    fn inconsistency_is_reported() {
        let mut rels = RelationSet::from_relations([a(1).sub(&SymPoly::int(1))]).unwrap();
        assert!(rels.push(a(1).sub(&SymPoly::int(2))).is_err());
    }

    #[test]
    fn shuffle_pivot_is_beta() {
        let rels = RelationSet::from_relations([shuffle_relation(0, 1)]).unwrap();
        let r = rels.reduce(&SymPoly::sym(SymId::Beta(1, 0)));
        assert_eq!(r, a(0).mul(&a(1)).sub(&SymPoly::sym(SymId::Beta(0, 1))));
    }
}
