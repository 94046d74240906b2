//! Brute-force fixed-space dimensions, compared against the Hilbert series
//! `(1 + t^e) / prod_i (1 - t^{d_i})` of a hypersurface ring.
//!
//! The fixed space in degree `d` is the common nullspace of `f -> (f)g - f`
//! over the given group generators, computed on the monomial basis by exact
//! elimination. It does not use anything from the invariant constructions.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::{enumerate_p, generators_sl2, GroupElem};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, GfElem};
use crate::linalg::{dot, RowReducer};
use crate::poly::{Monomial, Poly, Var};

/// Upper bound on `generators * columns^3` for one fixed-space computation.
pub const ORACLE_COST_LIMIT: f64 = 1.0e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupTag {
    P,
    SL2,
}

impl GroupTag {
    pub fn label(self) -> &'static str {
        match self {
            GroupTag::P => "P",
            GroupTag::SL2 => "SL2",
        }
    }

    pub fn generators(self, ctx: &Arc<FieldCtx>) -> Vec<GroupElem> {
        match self {
            GroupTag::P => enumerate_p(ctx),
            GroupTag::SL2 => generators_sl2(ctx),
        }
    }

    /// `(hsop degrees, degree of the second module generator)`.
    pub fn hypersurface_params(self, q: u32) -> (Vec<u32>, u32) {
        match self {
            GroupTag::P => (vec![1, 2, q], q),
            GroupTag::SL2 => {
                let n = q * (q - 1) / 2;
                (vec![2, q + 1, n], q + n)
            }
        }
    }
}

/// Monomials of degree `d`, descending grevlex.
pub fn monomial_basis(d: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (0..=d)
        .flat_map(|e0| (0..=d - e0).map(move |e1| Monomial::new(e0, e1, d - e0 - e1)))
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub fn estimated_cost(num_generators: usize, d: u32) -> f64 {
    let cols = ((d as f64 + 1.0) * (d as f64 + 2.0)) / 2.0;
    num_generators as f64 * cols.powi(3)
}

pub fn check_budget(ctx: &FieldCtx, num_generators: usize, d: u32) -> Result<()> {
    let cost = estimated_cost(num_generators, d);
    if cost > ORACLE_COST_LIMIT {
        return Err(Error::BudgetExceeded { q: ctx.q(), degree: d, cost, limit: ORACLE_COST_LIMIT });
    }
    Ok(())
}

/// Images `(m)g - m` of every basis monomial, as dense columns.
struct DegreeMaps {
    basis: Vec<Monomial>,
    /// `columns[g][j]` = image of basis monomial `j` under generator `g`, minus itself.
    columns: Vec<Vec<Vec<GfElem>>>,
}

fn monomial_images(ctx: &Arc<FieldCtx>, g: &GroupElem, basis: &[Monomial], d: u32) -> Result<Vec<Poly>> {
    let images = [g.image_of(Var::A0), g.image_of(Var::A1), g.image_of(Var::A2)];
    let powers: Vec<Vec<Poly>> = images
        .iter()
        .map(|l| {
            let mut v = vec![Poly::one(ctx)];
            for i in 0..d as usize {
                v.push(&v[i] * l);
            }
            v
        })
        .collect();
    basis
        .iter()
        .map(|m| {
            let [e0, e1, e2] = m.exps;
            Ok(&(&powers[0][e0 as usize] * &powers[1][e1 as usize]) * &powers[2][e2 as usize])
        })
        .collect()
}

fn degree_maps(ctx: &Arc<FieldCtx>, generators: &[GroupElem], d: u32) -> Result<DegreeMaps> {
    let basis = monomial_basis(d);
    let index = |m: &Monomial| basis.iter().position(|b| b == m).expect("image stays in degree d");
    let mut columns = Vec::with_capacity(generators.len());
    for g in generators {
        let imgs = monomial_images(ctx, g, &basis, d)?;
        let cols = imgs
            .iter()
            .zip(&basis)
            .map(|(img, m)| {
                let mut col = vec![GfElem::ZERO; basis.len()];
                for (tm, tc) in img.terms() {
                    col[index(tm)] = *tc;
                }
                let j = index(m);
                col[j] = ctx.sub(col[j], GfElem::ONE);
                col
            })
            .collect();
        columns.push(cols);
    }
    Ok(DegreeMaps { basis, columns })
}

fn fixed_space(ctx: &Arc<FieldCtx>, generators: &[GroupElem], d: u32) -> Result<(Vec<Monomial>, Vec<Vec<GfElem>>)> {
    if generators.is_empty() {
        return Err(Error::IdentityFailed("at least one generator is required".into()));
    }
    check_budget(ctx, generators.len(), d)?;
    let maps = degree_maps(ctx, generators, d)?;
    let n = maps.basis.len();
    let mut red = RowReducer::new(ctx, n);
    'outer: for cols in &maps.columns {
        for i in 0..n {
            let row: Vec<GfElem> = cols.iter().map(|c| c[i]).collect();
            red.insert(row);
            if red.is_full() {
                break 'outer;
            }
        }
    }
    let null = red.nullspace();
    // every nullspace vector is checked against every stacked map
    for v in &null {
        for cols in &maps.columns {
            for i in 0..n {
                let row: Vec<GfElem> = cols.iter().map(|c| c[i]).collect();
                if !dot(ctx, &row, v).is_zero() {
                    return Err(Error::IdentityFailed(format!("nullspace vector fails row {i} in degree {d}")));
                }
            }
        }
    }
    Ok((maps.basis, null))
}

/// Dimension of the degree-`d` polynomials fixed by every generator.
pub fn invariant_dimension(ctx: &Arc<FieldCtx>, generators: &[GroupElem], d: u32) -> Result<usize> {
    Ok(fixed_space(ctx, generators, d)?.1.len())
}

/// A basis of the degree-`d` fixed space, each element re-checked against the generators.
pub fn invariant_basis(ctx: &Arc<FieldCtx>, generators: &[GroupElem], d: u32) -> Result<Vec<Poly>> {
    let (basis, null) = fixed_space(ctx, generators, d)?;
    let polys: Vec<Poly> = null
        .iter()
        .map(|v| Poly::from_terms(ctx, basis.iter().copied().zip(v.iter().copied())))
        .collect();
    for f in &polys {
        for g in generators {
            if g.apply(f)? != *f {
                return Err(Error::NotInvariant(format!("oracle basis element {f} in degree {d}")));
            }
        }
    }
    Ok(polys)
}

/// Coefficients of `(1 + t^e) / prod (1 - t^{d_i})` through `t^max_degree`.
pub fn hilbert_hypersurface(hsop_degrees: &[u32], module_gen_degree: u32, max_degree: u32) -> Vec<u64> {
    let len = max_degree as usize + 1;
    let mut series = vec![0u64; len];
    series[0] = 1;
    for &d in hsop_degrees {
        assert!(d > 0, "hsop degrees must be positive");
        for i in d as usize..len {
            series[i] += series[i - d as usize];
        }
    }
    let mut out = series.clone();
    for i in module_gen_degree as usize..len {
        out[i] += series[i - module_gen_degree as usize];
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRow {
    pub degree: u32,
    pub observed: u64,
    pub predicted: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub group_tag: GroupTag,
    pub q: u32,
    pub max_degree: u32,
    pub hsop_degrees: Vec<u32>,
    pub module_gen_degree: u32,
    pub rows: Vec<DimRow>,
}

impl DimTable {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// True when every degree `0..=max_degree` is present.
    pub fn is_complete(&self) -> bool {
        self.rows.len() == self.max_degree as usize + 1 && self.rows.iter().enumerate().all(|(i, r)| r.degree as usize == i)
    }

    pub fn observed(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.observed).collect()
    }

    pub fn predicted(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.predicted).collect()
    }

    /// Observed series multiplied by `prod (1 - t^{d_i})`, truncated; this is
    /// the numerator of the Hilbert series through `max_degree`. Requires a
    /// complete table.
    pub fn implied_numerator(&self) -> Option<Vec<i64>> {
        if !self.is_complete() {
            return None;
        }
        let mut num: Vec<i64> = self.observed().iter().map(|&x| x as i64).collect();
        for &d in &self.hsop_degrees {
            for i in (d as usize..num.len()).rev() {
                num[i] -= num[i - d as usize];
            }
        }
        Some(num)
    }

    /// Rank over the hsop subalgebra, read off the numerator; needs the table
    /// to reach the module generator degree.
    pub fn implied_rank(&self) -> Option<i64> {
        if self.max_degree < self.module_gen_degree {
            return None;
        }
        self.implied_numerator().map(|n| n.iter().sum())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} invariants over F_{}: observed vs (1 + t^{})/prod(1 - t^d), d in {:?}",
            self.group_tag.label(),
            self.q,
            self.module_gen_degree,
            self.hsop_degrees
        );
        let _ = writeln!(s, "{:>6} | {:>8} | {:>9} | pass", "degree", "observed", "predicted");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>6} | {:>8} | {:>9} | {}",
                r.degree,
                r.observed,
                r.predicted,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        s
    }
}

/// Observed against predicted dimensions in the listed degrees.
pub fn compare_degrees(ctx: &Arc<FieldCtx>, tag: GroupTag, degrees: &[u32]) -> Result<DimTable> {
    let gens = tag.generators(ctx);
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    check_budget(ctx, gens.len(), max_degree)?;
    let (hsop, e) = tag.hypersurface_params(ctx.q());
    let predicted = hilbert_hypersurface(&hsop, e, max_degree);
    let mut rows = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let observed = invariant_dimension(ctx, &gens, d)? as u64;
        let p = predicted[d as usize];
        rows.push(DimRow { degree: d, observed, predicted: p, pass: observed == p });
    }
    Ok(DimTable { group_tag: tag, q: ctx.q(), max_degree, hsop_degrees: hsop, module_gen_degree: e, rows })
}

/// Every degree from 0 through `max_degree`.
pub fn compare(ctx: &Arc<FieldCtx>, tag: GroupTag, max_degree: u32) -> Result<DimTable> {
    let degrees: Vec<u32> = (0..=max_degree).collect();
    compare_degrees(ctx, tag, &degrees)
}

/// Default oracle degree: `2 deg B` for `q = 3`, `deg B + q` for `q = 5`,
/// `q + 1` otherwise, lowered if needed to stay within the budget.
pub fn default_max_degree(ctx: &FieldCtx) -> u32 {
    let q = ctx.q();
    let deg_b = q + q * (q - 1) / 2;
    let wanted = match q {
        3 => 2 * deg_b,
        5 => deg_b + q,
        _ => q + 1,
    };
    let gens = q as usize + 1;
    (0..=wanted).rev().find(|&d| estimated_cost(gens, d) <= ORACLE_COST_LIMIT).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::enumerate_sl2;

    fn field(p: i64, n: i64) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, n).unwrap())
    }

    /// Coefficients of `1/prod(1 - t^{d_i})` by counting solutions of
    /// `sum k_i d_i = n` directly.
    fn count_partitions(parts: &[u32], n: u32) -> u64 {
        match parts.split_first() {
            None => (n == 0) as u64,
            Some((&d, rest)) => (0..=n / d).map(|k| count_partitions(rest, n - k * d)).sum(),
        }
    }

    #[test]
    fn hilbert_series_matches_partition_count() {
        for (hsop, e) in [(vec![1, 2, 3], 3), (vec![2, 4, 3], 6), (vec![2, 6, 10], 15), (vec![1, 2, 7], 7)] {
            let series = hilbert_hypersurface(&hsop, e, 40);
            for n in 0..=40u32 {
                let shifted = if n >= e { count_partitions(&hsop, n - e) } else { 0 };
                assert_eq!(series[n as usize], count_partitions(&hsop, n) + shifted);
            }
        }
        assert_eq!(hilbert_hypersurface(&[1, 2, 3], 3, 4), vec![1, 1, 2, 4, 5]);
        assert_eq!(hilbert_hypersurface(&[2, 4, 3], 6, 6)[6], 4);
        assert_eq!(hilbert_hypersurface(&[1], 1000, 5), vec![1; 6]);
    }

    #[test]
    fn small_dimensions() {
        let ctx = field(3, 1);
        let p = enumerate_p(&ctx);
        let sl2 = generators_sl2(&ctx);
        assert_eq!(invariant_dimension(&ctx, &p, 1).unwrap(), 1);
        assert_eq!(invariant_dimension(&ctx, &sl2, 2).unwrap(), 1);
        for gens in [&p, &sl2] {
            assert_eq!(invariant_dimension(&ctx, gens, 0).unwrap(), 1);
        }
        let f7 = field(7, 1);
        assert_eq!(invariant_dimension(&f7, &generators_sl2(&f7), 0).unwrap(), 1);
    }

    #[test]
    fn small_bases() {
        let ctx = field(3, 1);
        let sl2 = generators_sl2(&ctx);
        let deg2 = invariant_basis(&ctx, &sl2, 2).unwrap();
        assert_eq!(deg2.len(), 1);
        let delta = Poly::parse(&ctx, "a1^2 - a0*a2").unwrap();
        let c = deg2[0].lead_coeff().unwrap();
        assert_eq!(deg2[0], delta.scale(c));
        assert!(invariant_basis(&ctx, &sl2, 1).unwrap().is_empty());
        let p1 = invariant_basis(&ctx, &enumerate_p(&ctx), 1).unwrap();
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].lead_monomial().unwrap(), Monomial::new(1, 0, 0));
    }

    #[test]
    fn generators_and_full_group_agree() {
        let ctx = field(3, 1);
        let all = enumerate_sl2(&ctx).unwrap();
        let gens = generators_sl2(&ctx);
        for d in 0..=8 {
            assert_eq!(invariant_dimension(&ctx, &all, d).unwrap(), invariant_dimension(&ctx, &gens, d).unwrap());
        }
    }

    #[test]
    fn subgroup_has_more_invariants() {
        let ctx = field(5, 1);
        let p = compare(&ctx, GroupTag::P, 8).unwrap();
        let s = compare(&ctx, GroupTag::SL2, 8).unwrap();
        for (a, b) in p.observed().iter().zip(s.observed()) {
            assert!(*a >= b);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = field(7, 1);
        assert!(matches!(compare(&ctx, GroupTag::SL2, 500), Err(Error::BudgetExceeded { .. })));
        assert_eq!(default_max_degree(&field(3, 1)), 12);
        assert_eq!(default_max_degree(&field(5, 1)), 20);
        assert_eq!(default_max_degree(&field(7, 1)), 8);
        assert_eq!(default_max_degree(&field(3, 2)), 10);
    }

    #[test]
    fn table_text_has_one_row_per_degree() {
        let ctx = field(3, 1);
        let t = compare(&ctx, GroupTag::P, 4).unwrap();
        assert!(t.pass());
        assert_eq!(t.to_text().lines().count(), 2 + 5);
        assert_eq!(t.implied_rank(), Some(2));
    }
}
