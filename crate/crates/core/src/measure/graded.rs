use crate::error::{Error, Result};
use crate::padic::{PadicNum, PrimeContext};

use super::ops::{exterior_product, linear_combine, measures_identical};
use super::LevelFamily;

/// (μ_0, μ_1, …, μ_M) with μ_i of dimension i.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSequence {
    entries: Vec<LevelFamily>,
}

impl GradedSequence {
    pub fn new(entries: Vec<LevelFamily>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if e.dim() != i {
                return Err(Error::DimMismatch(i, e.dim()));
            }
        }
        Ok(Self { entries })
    }

    /// (1, 0, …, 0) up to degree M.
    pub fn unit(ctx: PrimeContext, m: usize) -> Self {
        let mut entries = vec![LevelFamily::scalar(ctx, PadicNum::one())];
        entries.extend((1..=m).map(|i| LevelFamily::zero(ctx, i)));
        Self { entries }
    }

    pub fn degree(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[LevelFamily] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &LevelFamily {
        &self.entries[i]
    }

    /// c_i = Σ_{j+k=i} α_j·β_k, truncated at the smaller degree.
    pub fn star(&self, other: &Self) -> Result<Self> {
        let m = self.degree().min(other.degree());
        let entries = (0..=m)
            .map(|i| {
                let parts = (0..=i)
                    .map(|j| exterior_product(&self.entries[j], &other.entries[i - j]))
                    .collect::<Result<Vec<_>>>()?;
                let refs: Vec<&LevelFamily> = parts.iter().collect();
                linear_combine(&vec![PadicNum::one(); refs.len()], &refs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    /// Entrywise exact equality on common degrees and levels.
    pub fn identical(&self, other: &Self) -> bool {
        self.entries.iter().zip(&other.entries).all(|(a, b)| measures_identical(a, b))
    }

    /// First degree at which the entries differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.entries.iter().zip(&other.entries).position(|(a, b)| !measures_identical(a, b))
    }
}
