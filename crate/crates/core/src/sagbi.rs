//! Subduction against a finite set of generators and bounded SAGBI certification.
//!
//! A generating set is a SAGBI basis when every tête-à-tête (two power
//! products of the generators with the same lead monomial) subducts to zero.
//! Tête-à-têtes are found by enumerating power products up to a degree bound,
//! so a passing certificate holds up to that bound only.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, GfElem};
use crate::poly::{Monomial, Poly};

/// Named generators with cached lead data.
#[derive(Debug, Clone)]
pub struct GenSet {
    names: Vec<String>,
    polys: Vec<Poly>,
    leads: Vec<(Monomial, GfElem)>,
}

impl GenSet {
    pub fn new<S: Into<String>>(named: impl IntoIterator<Item = (S, Poly)>) -> Result<GenSet> {
        let (names, polys): (Vec<String>, Vec<Poly>) = named.into_iter().map(|(n, p)| (n.into(), p)).unzip();
        if polys.is_empty() {
            return Err(Error::InvalidGenSet("no generators".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::InvalidGenSet(format!("duplicate name {n}")));
            }
        }
        let ctx = polys[0].ctx().clone();
        let mut leads = Vec::with_capacity(polys.len());
        for (n, p) in names.iter().zip(&polys) {
            if **p.ctx() != *ctx {
                return Err(Error::FieldMismatch { left: ctx.q(), right: p.ctx().q() });
            }
            let lt = p.lead_term().map_err(|_| Error::InvalidGenSet(format!("{n} is zero")))?;
            if lt.0.degree() == 0 {
                return Err(Error::InvalidGenSet(format!("{n} has a constant lead term")));
            }
            leads.push(lt);
        }
        Ok(GenSet { names, polys, leads })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.leads.iter().map(|l| l.0).collect()
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.polys[0].ctx()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.leads.iter().map(|l| l.0.degree()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn lead_of(&self, exps: &[u32]) -> Monomial {
        exps.iter()
            .zip(&self.leads)
            .fold(Monomial::ONE, |acc, (&e, l)| acc.mul(&l.0.pow(e)))
    }

    fn lead_coeff_of(&self, exps: &[u32]) -> GfElem {
        let ctx = self.ctx();
        exps.iter()
            .zip(&self.leads)
            .fold(GfElem::ONE, |acc, (&e, l)| ctx.mul(acc, ctx.pow(l.1, e as u64)))
    }

    /// All nonnegative `e` with `prod LM(g_i)^{e_i} = target`.
    pub fn lead_solutions(&self, target: &Monomial) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.len()];
        self.solve_from(0, target.exps, &mut cur, &mut out);
        out
    }

    fn solve_from(&self, i: usize, rest: [u32; 3], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == self.len() {
            if rest == [0, 0, 0] {
                out.push(cur.clone());
            }
            return;
        }
        let lead = self.leads[i].0.exps;
        let max = (0..3)
            .filter(|&k| lead[k] > 0)
            .map(|k| rest[k] / lead[k])
            .min()
            .unwrap_or(0);
        for e in 0..=max {
            cur[i] = e;
            let next = [rest[0] - e * lead[0], rest[1] - e * lead[1], rest[2] - e * lead[2]];
            self.solve_from(i + 1, next, cur, out);
        }
        cur[i] = 0;
    }
}

/// Compares exponent vectors starting from the last generator.
fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Memoized powers and power products of a generator set.
pub struct PowerTable<'a> {
    gens: &'a GenSet,
    powers: HashMap<(usize, u32), Poly>,
}

impl<'a> PowerTable<'a> {
    pub fn new(gens: &'a GenSet) -> PowerTable<'a> {
        PowerTable { gens, powers: HashMap::new() }
    }

    pub fn power(&mut self, i: usize, e: u32) -> Poly {
        if e == 0 {
            return Poly::one(self.gens.ctx());
        }
        if let Some(p) = self.powers.get(&(i, e)) {
            return p.clone();
        }
        let p = if e == 1 {
            self.gens.polys[i].clone()
        } else {
            let half = self.power(i, e / 2);
            let sq = &half * &half;
            if e % 2 == 1 {
                &sq * &self.gens.polys[i]
            } else {
                sq
            }
        };
        self.powers.insert((i, e), p.clone());
        p
    }

    pub fn product(&mut self, exps: &[u32]) -> Poly {
        let mut acc: Option<Poly> = None;
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = self.power(i, e);
            acc = Some(match acc {
                None => p,
                Some(a) => &a * &p,
            });
        }
        acc.unwrap_or_else(|| Poly::one(self.gens.ctx()))
    }
}

/// Polynomial in the generator names.
#[derive(Clone, PartialEq, Eq)]
pub struct Expression {
    ctx: Arc<FieldCtx>,
    names: Vec<String>,
    terms: BTreeMap<Vec<u32>, GfElem>,
}

impl std::fmt::Debug for Expression {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Expression({})", self.to_text())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpressionTerm {
    pub exponents: Vec<u32>,
    pub coeff: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpressionRecord {
    pub vars: Vec<String>,
    pub terms: Vec<ExpressionTerm>,
}

impl Expression {
    pub fn zero(ctx: &Arc<FieldCtx>, names: &[String]) -> Expression {
        Expression { ctx: ctx.clone(), names: names.to_vec(), terms: BTreeMap::new() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms with exponent vectors in descending lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GfElem)> + '_ {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: GfElem) {
        if c.is_zero() {
            return;
        }
        let sum = self.ctx.add(self.coeff(&exps), c);
        if sum.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> GfElem {
        self.terms.get(exps).copied().unwrap_or(GfElem::ZERO)
    }

    /// Whether the named generator occurs with positive exponent.
    pub fn uses(&self, name: &str) -> bool {
        self.max_exponent(name) > 0
    }

    pub fn max_exponent(&self, name: &str) -> u32 {
        match self.names.iter().position(|n| n == name) {
            None => 0,
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
        }
    }

    /// The same expression over only the names that occur.
    pub fn restrict_to_used(&self) -> Expression {
        let keep: Vec<usize> = (0..self.names.len()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect();
        Expression {
            ctx: self.ctx.clone(),
            names: keep.iter().map(|&i| self.names[i].clone()).collect(),
            terms: self.terms.iter().map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), *c)).collect(),
        }
    }

    /// Substitutes the generators of `gens` for the names.
    pub fn eval(&self, gens: &GenSet) -> Result<Poly> {
        if gens.names() != self.names.as_slice() {
            return Err(Error::InvalidGenSet(format!(
                "expression over {:?} evaluated against {:?}",
                self.names,
                gens.names()
            )));
        }
        let mut table = PowerTable::new(gens);
        self.eval_with(&mut table)
    }

    pub fn eval_with(&self, table: &mut PowerTable<'_>) -> Result<Poly> {
        let mut out = Poly::zero(&self.ctx);
        for (exps, c) in &self.terms {
            let prod = table.product(exps);
            out.add_scaled_shifted(&prod, *c, &Monomial::ONE)?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(exps, c)| {
                let factors: Vec<String> = exps
                    .iter()
                    .zip(&self.names)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                    .collect();
                let cs = self.ctx.format(*c);
                match (factors.is_empty(), *c == GfElem::ONE) {
                    (true, _) => cs,
                    (false, true) => factors.join("*"),
                    (false, false) => format!("{cs}*{}", factors.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_record(&self) -> ExpressionRecord {
        ExpressionRecord {
            vars: self.names.clone(),
            terms: self
                .terms()
                .map(|(e, c)| ExpressionTerm { exponents: e.clone(), coeff: self.ctx.coords(*c) })
                .collect(),
        }
    }

    /// `{"vars": [...], "terms": [{"exponents": [...], "coeff": [...]}]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("expression serializes")
    }

    pub fn from_json(ctx: &Arc<FieldCtx>, s: &str) -> Result<Expression> {
        let rec: ExpressionRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Expression::zero(ctx, &rec.vars);
        for t in rec.terms {
            if t.exponents.len() != rec.vars.len() {
                return Err(Error::Parse("exponent vector length differs from vars".into()));
            }
            let coords: Vec<i64> = t.coeff.iter().map(|&c| c as i64).collect();
            out.add_term(t.exponents, ctx.from_coords(&coords)?);
        }
        Ok(out)
    }
}

/// Outcome of a subduction run.
#[derive(Debug, Clone)]
pub struct Subduction {
    pub remainder: Poly,
    pub expr: Expression,
    pub steps: usize,
    /// Steps at which more than one exponent vector matched the lead monomial.
    pub ambiguous_steps: usize,
}

/// Repeatedly cancels the lead term of `f` by a scalar multiple of a power
/// product of generators, stopping at zero or at the first lead monomial that
/// is not a power product of generator lead monomials.
///
/// When several exponent vectors match, the one smallest when compared from
/// the last generator backwards is used.
pub fn subduct(f: &Poly, gens: &GenSet) -> Result<Subduction> {
    let mut table = PowerTable::new(gens);
    subduct_with(f, gens, &mut table)
}

pub fn subduct_with(f: &Poly, gens: &GenSet, table: &mut PowerTable<'_>) -> Result<Subduction> {
    let ctx = gens.ctx().clone();
    if *f.ctx().as_ref() != *ctx {
        return Err(Error::FieldMismatch { left: f.ctx().q(), right: ctx.q() });
    }
    let mut rem = f.clone();
    let mut expr = Expression::zero(&ctx, gens.names());
    let mut steps = 0;
    let mut ambiguous_steps = 0;
    let mut last_lm: Option<Monomial> = None;
    while let Ok((lm, lc)) = rem.lead_term() {
        if let Some(prev) = last_lm {
            assert!(lm < prev, "subduction lead monomial failed to decrease: {lm} after {prev}");
        }
        last_lm = Some(lm);
        let mut sols = gens.lead_solutions(&lm);
        if sols.is_empty() {
            break;
        }
        if sols.len() > 1 {
            ambiguous_steps += 1;
            sols.sort_by(|a, b| revlex(a, b));
        }
        let exps = sols.swap_remove(0);
        let prod = table.product(&exps);
        let c = ctx.div(lc, prod.lead_coeff()?)?;
        rem.add_scaled_shifted(&prod, ctx.neg(c), &Monomial::ONE)?;
        expr.add_term(exps, c);
        steps += 1;
    }
    Ok(Subduction { remainder: rem, expr, steps, ambiguous_steps })
}

#[derive(Debug, Clone)]
pub enum Membership {
    Member(Expression),
    NotMember(Poly),
}

/// Membership in the generated algebra via subduction; sound once `gens`
/// has passed [`certify_sagbi`] in the relevant degrees.
pub fn membership(f: &Poly, gens: &GenSet) -> Result<Membership> {
    let s = subduct(f, gens)?;
    Ok(if s.remainder.is_zero() { Membership::Member(s.expr) } else { Membership::NotMember(s.remainder) })
}

#[derive(Debug, Clone)]
pub struct TeteATete {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    pub degree: u32,
    pub lead_monomial: Monomial,
    /// `c` in `gens^u - c * gens^v`.
    pub scalar: GfElem,
    /// `gens^u - c * gens^v`, normalized to lead coefficient 1 (or zero).
    pub witness: Poly,
}

/// Pairs of disjoint-support exponent vectors of degree at most `degree_bound`
/// whose power products share a lead monomial.
pub fn find_tete_a_tetes(gens: &GenSet, degree_bound: u32) -> Result<Vec<TeteATete>> {
    let max = gens.max_degree();
    if degree_bound < max {
        return Err(Error::DegreeBoundTooSmall { bound: degree_bound, max });
    }
    let degs = gens.degrees();
    let mut by_lead: BTreeMap<Monomial, Vec<Vec<u32>>> = BTreeMap::new();
    let mut cur = vec![0u32; gens.len()];
    enumerate_vectors(&degs, 0, degree_bound, &mut cur, &mut |v| {
        by_lead.entry(gens.lead_of(v)).or_default().push(v.to_vec());
    });

    let ctx = gens.ctx().clone();
    let mut table = PowerTable::new(gens);
    let mut out = Vec::new();
    for (lm, vecs) in by_lead {
        if vecs.len() < 2 {
            continue;
        }
        for i in 0..vecs.len() {
            for j in i + 1..vecs.len() {
                let (a, b) = (&vecs[i], &vecs[j]);
                if a.iter().zip(b).any(|(x, y)| *x > 0 && *y > 0) {
                    continue;
                }
                let (u, v) = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                let scalar = ctx.div(gens.lead_coeff_of(&u), gens.lead_coeff_of(&v))?;
                let mut witness = table.product(&u);
                witness.add_scaled_shifted(&table.product(&v), ctx.neg(scalar), &Monomial::ONE)?;
                if let Ok(lc) = witness.lead_coeff() {
                    witness = witness.scale(ctx.inv(lc)?);
                }
                out.push(TeteATete { degree: lm.degree(), lead_monomial: lm, u, v, scalar, witness });
            }
        }
    }
    out.sort_by(|x, y| x.degree.cmp(&y.degree).then_with(|| x.u.cmp(&y.u)).then_with(|| x.v.cmp(&y.v)));
    Ok(out)
}

fn enumerate_vectors(degs: &[u32], i: usize, budget: u32, cur: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if i == degs.len() {
        visit(cur);
        return;
    }
    let mut e = 0;
    loop {
        let used = e * degs[i];
        if used > budget {
            break;
        }
        cur[i] = e;
        enumerate_vectors(degs, i + 1, budget - used, cur, visit);
        e += 1;
    }
    cur[i] = 0;
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub tete: TeteATete,
    pub subduction: Subduction,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SagbiReport {
    pub names: Vec<String>,
    pub degree_bound: u32,
    pub witnesses: Vec<WitnessReport>,
}

impl SagbiReport {
    pub fn pass(&self) -> bool {
        self.witnesses.iter().all(|w| w.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "SAGBI check for {{{}}}: {} ({} tete-a-tete(s), certified up to degree {})",
            self.names.join(", "),
            if self.pass() { "pass" } else { "FAIL" },
            self.witnesses.len(),
            self.degree_bound
        );
        for w in &self.witnesses {
            let _ = writeln!(
                s,
                "  u={:?} v={:?} degree={} steps={} remainder={} {}",
                w.tete.u,
                w.tete.v,
                w.tete.degree,
                w.subduction.steps,
                if w.subduction.remainder.is_zero() { "0".to_string() } else { w.subduction.remainder.to_text() },
                if w.pass { "pass" } else { "FAIL" }
            );
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "generators": self.names,
            "degree_bound": self.degree_bound,
            "certified_up_to_degree": self.degree_bound,
            "pass": self.pass(),
            "witnesses": self.witnesses.iter().map(|w| json!({
                "u": w.tete.u,
                "v": w.tete.v,
                "degree": w.tete.degree,
                "steps": w.subduction.steps,
                "expression": w.subduction.expr.to_record(),
                "remainder": w.subduction.remainder.to_records(),
                "pass": w.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Subducts every tête-à-tête witness up to `degree_bound`.
pub fn certify_sagbi(gens: &GenSet, degree_bound: u32) -> Result<SagbiReport> {
    let tetes = find_tete_a_tetes(gens, degree_bound)?;
    let mut table = PowerTable::new(gens);
    let mut witnesses = Vec::with_capacity(tetes.len());
    for tete in tetes {
        let subduction = subduct_with(&tete.witness, gens, &mut table)?;
        let pass = subduction.remainder.is_zero();
        witnesses.push(WitnessReport { tete, subduction, pass });
    }
    Ok(SagbiReport { names: gens.names().to_vec(), degree_bound, witnesses })
}
