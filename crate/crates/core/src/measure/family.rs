use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::padic::{vp, PadicNum, PrimeContext};

/// A distribution on (Z_p)^dim, stored as its level tables μ^{(0)}..μ^{(n_max)}.
///
/// Points of (Z/p^n)^m are flattened with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelFamily {
    ctx: PrimeContext,
    dim: usize,
    tables: Vec<Vec<PadicNum>>,
    denom_bound: u32,
}

/// Outcome of [`LevelFamily::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistReport {
    pub pass: bool,
    pub failure: Option<DistFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistFailure {
    pub n: u32,
    pub a: Vec<u64>,
    pub defect: PadicNum,
}

impl LevelFamily {
    /// Builds every level from `f(n, a)`; the denominator bound is the worst observed.
    pub fn from_fn<F>(ctx: PrimeContext, dim: usize, f: F) -> Self
    where
        F: Fn(u32, &[u64]) -> PadicNum + Sync + Send,
    {
        let tables = (0..=ctx.n_max)
            .map(|n| {
                let size = level_size(&ctx, dim, n);
                exec::map_range(size, |flat| f(n, &unflatten(&ctx, dim, n, flat)))
            })
            .collect();
        Self::from_tables(ctx, dim, tables)
    }

    pub fn from_tables(ctx: PrimeContext, dim: usize, tables: Vec<Vec<PadicNum>>) -> Self {
        assert_eq!(tables.len(), ctx.n_max as usize + 1, "one table per level");
        for (n, t) in tables.iter().enumerate() {
            assert_eq!(t.len(), level_size(&ctx, dim, n as u32), "table size at level {n}");
        }
        let denom_bound = observed_bound(&ctx, &tables);
        Self { ctx, dim, tables, denom_bound }
    }

    pub fn zero(ctx: PrimeContext, dim: usize) -> Self {
        Self::from_fn(ctx, dim, |_, _| PadicNum::zero())
    }

    /// The dim-0 family with constant value `c`.
    pub fn scalar(ctx: PrimeContext, c: PadicNum) -> Self {
        Self::from_fn(ctx, 0, move |_, _| c.clone())
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_max(&self) -> u32 {
        self.ctx.n_max
    }

    pub fn denom_bound(&self) -> u32 {
        self.denom_bound
    }

    /// Raise the recorded bound, e.g. to a theoretical one wider than what was observed.
    pub fn with_denom_bound(mut self, d: u32) -> Self {
        self.denom_bound = self.denom_bound.max(d);
        self
    }

    pub fn table(&self, n: u32) -> &[PadicNum] {
        &self.tables[n as usize]
    }

    pub fn tables(&self) -> &[Vec<PadicNum>] {
        &self.tables
    }

    /// μ^{(n)}(a); coordinates are reduced mod p^n.
    pub fn get(&self, n: u32, a: &[u64]) -> &PadicNum {
        &self.tables[n as usize][flatten(&self.ctx, n, a)]
    }

    /// μ^{(n)}(a) for signed integer coordinates.
    pub fn get_i(&self, n: u32, a: &[i64]) -> &PadicNum {
        let pn = self.ctx.pn(n) as i64;
        let a: Vec<u64> = a.iter().map(|&x| x.rem_euclid(pn) as u64).collect();
        self.get(n, &a)
    }

    pub fn level_points(&self, n: u32) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.tables[n as usize].len()).map(move |f| unflatten(&self.ctx, self.dim, n, f))
    }

    /// Truncate to levels ≤ n_max.
    pub fn truncate(&self, n_max: u32) -> Result<Self> {
        if n_max > self.ctx.n_max {
            return Err(Error::LevelOutOfRange { level: n_max, n_max: self.ctx.n_max });
        }
        let ctx = self.ctx.with_n_max(n_max);
        let tables = self.tables[..=n_max as usize].to_vec();
        Ok(Self::from_tables(ctx, self.dim, tables).with_denom_bound(self.denom_bound))
    }

    /// Rebuild from a pointwise map of an existing family (same shape).
    pub fn map_values<F>(&self, f: F) -> Self
    where
        F: Fn(u32, &[u64], &PadicNum) -> PadicNum + Sync + Send,
    {
        Self::from_fn(self.ctx, self.dim, |n, a| f(n, a, self.get(n, a)))
    }

    /// Overwrite a single value (test hook for negative controls).
    pub fn with_value(mut self, n: u32, a: &[u64], v: PadicNum) -> Self {
        let i = flatten(&self.ctx, n, a);
        self.tables[n as usize][i] = v;
        self.denom_bound = observed_bound(&self.ctx, &self.tables).max(self.denom_bound);
        self
    }

    /// Distribution relation at every pair of consecutive stored levels; the
    /// first failure is reported in (level, lexicographic point) order.
    pub fn validate(&self) -> DistReport {
        let p = self.ctx.p;
        let lifts = p.pow(self.dim as u32) as usize;
        for n in 0..self.ctx.n_max {
            let size = self.tables[n as usize].len();
            let fail = exec::find_first(size, |flat| {
                let a = unflatten(&self.ctx, self.dim, n, flat);
                let pn = self.ctx.pn(n);
                let mut sum = PadicNum::zero();
                for l in 0..lifts {
                    let mut rest = l as u64;
                    let mut lifted = a.clone();
                    for x in lifted.iter_mut().rev() {
                        *x += (rest % p) * pn;
                        rest /= p;
                    }
                    sum += self.get(n + 1, &lifted);
                }
                let defect = self.get(n, &a) - &sum;
                (!defect.is_zero()).then_some(DistFailure { n, a, defect })
            });
            if let Some(f) = fail {
                return DistReport { pass: false, failure: Some(f) };
            }
        }
        DistReport { pass: true, failure: None }
    }

    /// CSV dump: `n,a_1,..,a_m,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for k in 1..=self.dim {
            out.push_str(&format!(",a_{k}"));
        }
        out.push_str(",value\n");
        for n in 0..=self.ctx.n_max {
            for (a, v) in self.level_points(n).zip(self.table(n)) {
                out.push_str(&n.to_string());
                for x in a {
                    out.push_str(&format!(",{x}"));
                }
                out.push_str(&format!(",{v}\n"));
            }
        }
        out
    }
}

pub fn level_size(ctx: &PrimeContext, dim: usize, n: u32) -> usize {
    ctx.pn(n).pow(dim as u32) as usize
}

pub fn flatten(ctx: &PrimeContext, n: u32, a: &[u64]) -> usize {
    let pn = ctx.pn(n);
    a.iter().fold(0u64, |acc, &x| acc * pn + x % pn) as usize
}

pub fn unflatten(ctx: &PrimeContext, dim: usize, n: u32, flat: usize) -> Vec<u64> {
    let pn = ctx.pn(n);
    let mut rest = flat as u64;
    let mut a = vec![0; dim];
    for slot in a.iter_mut().rev() {
        *slot = rest % pn;
        rest /= pn;
    }
    a
}

fn observed_bound(ctx: &PrimeContext, tables: &[Vec<PadicNum>]) -> u32 {
    tables
        .iter()
        .flatten()
        .filter_map(|v| vp(v, ctx.p))
        .map(|v| (-v).max(0) as u32)
        .max()
        .unwrap_or(0)
}
