//! Sparse polynomials in `a0, a1, a2` over `F_q`.
//!
//! Monomials are ordered by grevlex with `a0 < a1 < a2`: total degree first,
//! then the monomial with the smaller power of `a0` is larger, then the one
//! with the smaller power of `a1`. Terms are kept in a `BTreeMap` keyed by
//! that order, so the lead term is always the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, GfElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A0,
    A1,
    A2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::A0, Var::A1, Var::A2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::A0 => "a0",
            Var::A1 => "a1",
            Var::A2 => "a2",
        }
    }
}

/// `a0^e[0] * a1^e[1] * a2^e[2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub exps: [u32; 3],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0, 0, 0] };

    pub fn new(e0: u32, e1: u32, e2: u32) -> Monomial {
        Monomial { exps: [e0, e1, e2] }
    }

    pub fn var(v: Var) -> Monomial {
        let mut exps = [0; 3];
        exps[v.index()] = 1;
        Monomial { exps }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: [
                self.exps[0] + other.exps[0],
                self.exps[1] + other.exps[1],
                self.exps[2] + other.exps[2],
            ],
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial { exps: self.exps.map(|e| e * k) }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..3).all(|i| self.exps[i] <= other.exps[i])
    }

    /// `self / other`, if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial {
            exps: [
                self.exps[0] - other.exps[0],
                self.exps[1] - other.exps[1],
                self.exps[2] - other.exps[2],
            ],
        })
    }

    /// Integer weight `e1 + 2 e2`, before reduction mod `q - 1`.
    pub fn raw_weight(&self) -> u64 {
        self.exps[1] as u64 + 2 * self.exps[2] as u64
    }

    pub fn weight(&self, ctx: &FieldCtx) -> Weight {
        Weight::new(self.raw_weight(), ctx.q() - 1)
    }

    fn pack(&self) -> u64 {
        ((self.exps[0] as u64) << 42) | ((self.exps[1] as u64) << 21) | self.exps[2] as u64
    }

    fn unpack(k: u64) -> Monomial {
        const MASK: u64 = (1 << 21) - 1;
        Monomial::new((k >> 42) as u32, ((k >> 21) & MASK) as u32, (k & MASK) as u32)
    }
}

/// Grevlex comparison with `a0 < a1 < a2`.
pub fn grevlex_cmp(m: &Monomial, m2: &Monomial) -> Ordering {
    m.degree()
        .cmp(&m2.degree())
        .then_with(|| m2.exps[0].cmp(&m.exps[0]))
        .then_with(|| m2.exps[1].cmp(&m.exps[1]))
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Monomial::ONE {
            return write!(f, "1");
        }
        let parts: Vec<String> = Var::ALL
            .iter()
            .filter(|v| self.exps[v.index()] > 0)
            .map(|v| match self.exps[v.index()] {
                1 => v.name().to_string(),
                e => format!("{}^{e}", v.name()),
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A weight in `Z/(q-1)Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    value: u32,
    modulus: u32,
}

impl Weight {
    pub fn new(raw: u64, modulus: u32) -> Weight {
        Weight { value: (raw % modulus as u64) as u32, modulus }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<Monomial, GfElem>,
}

fn check_ctx(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::FieldMismatch { left: a.q(), right: b.q() })
    }
}

impl Poly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Poly {
        Poly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::constant(ctx, GfElem::ONE)
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: GfElem) -> Poly {
        Poly::term(ctx, Monomial::ONE, c)
    }

    pub fn var(ctx: &Arc<FieldCtx>, v: Var) -> Poly {
        Poly::term(ctx, Monomial::var(v), GfElem::ONE)
    }

    pub fn term(ctx: &Arc<FieldCtx>, m: Monomial, c: GfElem) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ctx: ctx.clone(), terms }
    }

    /// Sums duplicate monomials and drops zero coefficients.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: impl IntoIterator<Item = (Monomial, GfElem)>) -> Poly {
        let mut out = Poly::zero(ctx);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// `c0*a0 + c1*a1 + c2*a2`.
    pub fn linear(ctx: &Arc<FieldCtx>, coeffs: [GfElem; 3]) -> Poly {
        Poly::from_terms(ctx, Var::ALL.iter().map(|&v| (Monomial::var(v), coeffs[v.index()])))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> GfElem {
        self.terms.get(m).copied().unwrap_or(GfElem::ZERO)
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GfElem)> + '_ {
        self.terms.iter().rev()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn lead_term(&self) -> Result<(Monomial, GfElem)> {
        self.terms
            .iter()
            .next_back()
            .map(|(m, c)| (*m, *c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn lead_monomial(&self) -> Result<Monomial> {
        self.lead_term().map(|(m, _)| m)
    }

    pub fn lead_coeff(&self) -> Result<GfElem> {
        self.lead_term().map(|(_, c)| c)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: GfElem) {
        if c.is_zero() {
            return;
        }
        let ctx = &self.ctx;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ctx.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        check_ctx(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        check_ctx(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, self.ctx.neg(*c));
        }
        Ok(out)
    }

    /// `self += c * m * other`, in place.
    pub fn add_scaled_shifted(&mut self, other: &Poly, c: GfElem, m: &Monomial) -> Result<()> {
        check_ctx(&self.ctx, &other.ctx)?;
        if c.is_zero() {
            return Ok(());
        }
        for (om, oc) in &other.terms {
            let v = self.ctx.mul(*oc, c);
            self.add_term(om.mul(m), v);
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        check_ctx(&self.ctx, &other.ctx)?;
        let ctx = &self.ctx;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(ctx));
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 {
            let (m, c) = small.terms.iter().next().unwrap();
            return Ok(large.mul_term(m, *c));
        }
        let large_terms: Vec<(u64, GfElem)> = large.terms.iter().map(|(m, c)| (m.pack(), *c)).collect();
        let mut acc: FxHashMap<u64, GfElem> = FxHashMap::default();
        acc.reserve(large_terms.len() * 2);
        for (sm, sc) in &small.terms {
            let sk = sm.pack();
            for &(lk, lc) in &large_terms {
                let v = ctx.mul(*sc, lc);
                let slot = acc.entry(sk + lk).or_insert(GfElem::ZERO);
                *slot = ctx.add(*slot, v);
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (Monomial::unpack(k), c))
            .collect();
        Ok(Poly { ctx: ctx.clone(), terms })
    }

    pub fn mul_term(&self, m: &Monomial, c: GfElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(tm, tc)| (tm.mul(m), self.ctx.mul(*tc, c))).collect();
        Poly { ctx: self.ctx.clone(), terms }
    }

    pub fn scale(&self, k: GfElem) -> Poly {
        self.mul_term(&Monomial::ONE, k)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor` by repeated lead-term cancellation.
    pub fn exact_divide(&self, divisor: &Poly) -> Result<Poly> {
        check_ctx(&self.ctx, &divisor.ctx)?;
        let (lm_g, lc_g) = divisor.lead_term()?;
        let lc_inv = self.ctx.inv(lc_g)?;
        let mut quotient = Poly::zero(&self.ctx);
        let mut rem = self.clone();
        while let Ok((lm, lc)) = rem.lead_term() {
            let Some(shift) = lm.checked_div(&lm_g) else {
                return Err(Error::NotExact { remainder: Box::new(rem) });
            };
            let c = self.ctx.mul(lc, lc_inv);
            quotient.add_term(shift, c);
            rem.add_scaled_shifted(divisor, self.ctx.neg(c), &shift)?;
        }
        Ok(quotient)
    }

    /// Replaces `var` by `value` everywhere.
    pub fn substitute(&self, var: Var, value: &Poly) -> Result<Poly> {
        check_ctx(&self.ctx, &value.ctx)?;
        let vars: Vec<Poly> = Var::ALL.iter().map(|&v| Poly::var(&self.ctx, v)).collect();
        let mut images = [&vars[0], &vars[1], &vars[2]];
        images[var.index()] = value;
        self.substitute_all(images)
    }

    /// Simultaneous substitution `a_i -> images[i]`, evaluated by nested Horner
    /// schemes (outer in `a2`, then `a1`, inner in `a0`).
    pub fn substitute_all(&self, images: [&Poly; 3]) -> Result<Poly> {
        for img in images {
            check_ctx(&self.ctx, &img.ctx)?;
        }
        let ctx = &self.ctx;
        let mut nested: BTreeMap<u32, BTreeMap<u32, Vec<(u32, GfElem)>>> = BTreeMap::new();
        for (m, c) in &self.terms {
            nested
                .entry(m.exps[2])
                .or_default()
                .entry(m.exps[1])
                .or_default()
                .push((m.exps[0], *c));
        }
        let mut caches: [PowerCache; 3] = [
            PowerCache::new(images[0].clone()),
            PowerCache::new(images[1].clone()),
            PowerCache::new(images[2].clone()),
        ];
        let mut outer = Vec::with_capacity(nested.len());
        for (e2, by_e1) in nested.into_iter().rev() {
            let mut middle = Vec::with_capacity(by_e1.len());
            for (e1, mut list) in by_e1.into_iter().rev() {
                list.sort_by(|a, b| b.0.cmp(&a.0));
                let inner: Vec<(u32, Poly)> = list.into_iter().map(|(e0, c)| (e0, Poly::constant(ctx, c))).collect();
                middle.push((e1, horner(inner, &mut caches[0])));
            }
            outer.push((e2, horner(middle, &mut caches[1])));
        }
        Ok(horner(outer, &mut caches[2]))
    }

    pub fn is_isobaric(&self) -> Option<Weight> {
        let mut ws = self.terms.keys().map(|m| m.weight(&self.ctx));
        let first = ws.next()?;
        ws.all(|w| w == first).then_some(first)
    }

    /// Splits by parity of the integer weight `e1 + 2 e2` (equivalently, of `e1`).
    pub fn parity_split(&self) -> (Poly, Poly) {
        let mut even = Poly::zero(&self.ctx);
        let mut odd = Poly::zero(&self.ctx);
        for (m, c) in &self.terms {
            if m.raw_weight() % 2 == 0 {
                even.terms.insert(*m, *c);
            } else {
                odd.terms.insert(*m, *c);
            }
        }
        (even, odd)
    }

    /// Text form `c*a0^i*a1^j*a2^k + ...`, descending grevlex.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, c)| {
                let cs = self.ctx.format(*c);
                if *m == Monomial::ONE {
                    cs
                } else if *c == GfElem::ONE {
                    m.to_string()
                } else {
                    format!("{cs}*{m}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn parse(ctx: &Arc<FieldCtx>, s: &str) -> Result<Poly> {
        let mut out = Poly::zero(ctx);
        for (sign, term) in split_signed_terms(s)? {
            let mut coeff = GfElem::ONE;
            let mut mono = Monomial::ONE;
            for factor in term.split('*').map(str::trim) {
                match parse_var_power(factor)? {
                    Some((v, e)) => mono.exps[v.index()] += e,
                    None => coeff = ctx.mul(coeff, ctx.parse(factor)?),
                }
            }
            if sign < 0 {
                coeff = ctx.neg(coeff);
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(m, c)| TermRecord {
                e0: m.exps[0],
                e1: m.exps[1],
                e2: m.exps[2],
                coeff: self.ctx.coords(*c),
            })
            .collect()
    }

    pub fn from_records(ctx: &Arc<FieldCtx>, records: &[TermRecord]) -> Result<Poly> {
        let mut out = Poly::zero(ctx);
        for r in records {
            let coords: Vec<i64> = r.coeff.iter().map(|&c| c as i64).collect();
            out.add_term(Monomial::new(r.e0, r.e1, r.e2), ctx.from_coords(&coords)?);
        }
        Ok(out)
    }

    /// JSON list of `{e0, e1, e2, coeff}` records, descending grevlex.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("records serialize")
    }

    pub fn from_json(ctx: &Arc<FieldCtx>, s: &str) -> Result<Poly> {
        let records: Vec<TermRecord> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Poly::from_records(ctx, &records)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub e0: u32,
    pub e1: u32,
    pub e2: u32,
    /// Power-basis coordinates of the coefficient.
    pub coeff: Vec<u32>,
}

struct PowerCache {
    powers: Vec<Poly>,
}

impl PowerCache {
    fn new(base: Poly) -> PowerCache {
        PowerCache { powers: vec![Poly::one(base.ctx()), base] }
    }

    fn get(&mut self, e: u32) -> &Poly {
        while self.powers.len() <= e as usize {
            let next = &self.powers[self.powers.len() - 1] * &self.powers[1];
            self.powers.push(next);
        }
        &self.powers[e as usize]
    }
}

/// Evaluates `sum_i coeff_i * base^{e_i}` for exponents given in descending order.
fn horner(items: Vec<(u32, Poly)>, base: &mut PowerCache) -> Poly {
    let mut iter = items.into_iter();
    let Some((mut prev, mut acc)) = iter.next() else {
        return Poly::zero(base.powers[0].ctx());
    };
    for (e, coeff) in iter {
        acc = &(&acc * base.get(prev - e)) + &coeff;
        prev = e;
    }
    if prev > 0 {
        acc = &acc * base.get(prev);
    }
    acc
}

fn split_signed_terms(s: &str) -> Result<Vec<(i32, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut sign = 1;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push((sign, cur.trim().to_string()));
                } else if ch == '-' {
                    sign = -sign;
                    continue;
                }
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    if out.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    Ok(out)
}

fn parse_var_power(factor: &str) -> Result<Option<(Var, u32)>> {
    let (name, exp) = match factor.split_once('^') {
        Some((n, e)) => (n, Some(e)),
        None => (factor, None),
    };
    let var = match name {
        "a0" => Var::A0,
        "a1" => Var::A1,
        "a2" => Var::A2,
        _ => return Ok(None),
    };
    let e = match exp {
        None => 1,
        Some(e) => e.parse().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?,
    };
    Ok(Some((var, e)))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.ctx.q(), self.to_text())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("polynomial operands over different fields")
            }
        }
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.ctx.neg(GfElem::ONE))
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: i64, n: i64) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, n).unwrap())
    }

    fn vars(ctx: &Arc<FieldCtx>) -> (Poly, Poly, Poly) {
        (Poly::var(ctx, Var::A0), Poly::var(ctx, Var::A1), Poly::var(ctx, Var::A2))
    }

    #[test]
    fn grevlex_examples() {
        let a1sq = Monomial::new(0, 2, 0);
        let a0a2 = Monomial::new(1, 0, 1);
        assert_eq!(grevlex_cmp(&a1sq, &a0a2), Ordering::Greater);
        assert!(Monomial::new(0, 0, 1) > Monomial::new(0, 1, 0));
        assert!(Monomial::new(0, 1, 0) > Monomial::new(1, 0, 0));
        assert!(Monomial::new(0, 4, 0) > Monomial::new(1, 0, 3));
    }

    #[test]
    fn grevlex_is_a_multiplicative_total_order() {
        let monos: Vec<Monomial> = (0..=6u32)
            .flat_map(|d| (0..=d).flat_map(move |i| (0..=d - i).map(move |j| Monomial::new(i, j, d - i - j))))
            .collect();
        let small: Vec<Monomial> = monos.iter().filter(|m| m.degree() <= 2).copied().collect();
        for a in &monos {
            for b in &monos {
                let ab = a.cmp(b);
                assert_eq!(ab, b.cmp(a).reverse());
                assert_eq!(ab == Ordering::Equal, a == b);
                if ab == Ordering::Less {
                    for u in &small {
                        assert!(a.mul(u) < b.mul(u));
                    }
                }
            }
        }
    }

    #[test]
    fn lead_terms() {
        let ctx = field(3, 1);
        let (a0, a1, a2) = vars(&ctx);
        let delta = &(&a1 * &a1) - &(&a0 * &a2);
        assert_eq!(delta.lead_term().unwrap(), (Monomial::new(0, 2, 0), GfElem::ONE));
        let beta = &a1.pow(3) - &(&a0.pow(2) * &a1);
        assert_eq!(beta.lead_monomial().unwrap(), Monomial::new(0, 3, 0));
        assert!(matches!(Poly::zero(&ctx).lead_term(), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn basic_ring_examples() {
        let ctx = field(3, 1);
        let (a0, a1, _) = vars(&ctx);
        assert_eq!(&(&a1 - &a0) * &(&a1 + &a0), &a1.pow(2) - &a0.pow(2));
        let delta = &(&a1 * &a1) - &a0;
        assert_eq!(delta.pow(0), Poly::one(&ctx));
        assert_eq!((&a1 + &a0).pow(3), &a1.pow(3) + &a0.pow(3));
    }

    #[test]
    fn field_mismatch_is_an_error() {
        let (f3, f5) = (field(3, 1), field(5, 1));
        let x = Poly::var(&f3, Var::A0);
        let y = Poly::var(&f5, Var::A0);
        assert!(matches!(x.try_add(&y), Err(Error::FieldMismatch { left: 3, right: 5 })));
        assert!(x.try_mul(&y).is_err());
        // separately constructed contexts for the same field are compatible
        let x2 = Poly::var(&field(3, 1), Var::A1);
        assert!(x.try_mul(&x2).is_ok());
    }

    #[test]
    fn exact_division() {
        let ctx = field(7, 1);
        let (a0, a1, _) = vars(&ctx);
        let num = &a1.pow(2) - &a0.pow(2);
        assert_eq!(num.exact_divide(&(&a1 - &a0)).unwrap(), &a1 + &a0);
        let bad = &a1.pow(2) + &a0.pow(2);
        match bad.exact_divide(&(&a1 - &a0)) {
            Err(Error::NotExact { remainder }) => {
                assert_eq!(*remainder, a0.pow(2).scale(ctx.from_int(2)));
            }
            other => panic!("expected NotExact, got {other:?}"),
        }
        assert!(matches!(a0.exact_divide(&Poly::zero(&ctx)), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn substitution() {
        let ctx = field(5, 1);
        let (a0, a1, a2) = vars(&ctx);
        let delta = &a1.pow(2) - &(&a0 * &a2);
        assert_eq!(delta.substitute(Var::A0, &Poly::zero(&ctx)).unwrap(), a1.pow(2));
        let c = ctx.from_int(3);
        let shifted = &a1 + &a0.scale(c);
        assert_eq!(a1.substitute(Var::A1, &shifted).unwrap(), shifted);
        assert_eq!(delta.substitute(Var::A1, &a1).unwrap(), delta);
    }

    #[test]
    fn weights() {
        let ctx = field(7, 1);
        let (a0, a1, a2) = vars(&ctx);
        let delta = &a1.pow(2) - &(&a0 * &a2);
        assert_eq!(delta.is_isobaric().map(|w| w.value()), Some(2));
        let beta = &a1.pow(7) - &(&a0.pow(6) * &a1);
        assert_eq!(beta.is_isobaric().map(|w| w.value()), Some(1));
        assert_eq!((&a0 + &a1).is_isobaric(), None);
        let (even, odd) = (&a2 + &a1).parity_split();
        assert_eq!(even, a2);
        assert_eq!(odd, a1);
    }

    #[test]
    fn text_and_json_roundtrip() {
        let ctx = field(3, 2);
        let (a0, a1, a2) = vars(&ctx);
        let x = Poly::constant(&ctx, ctx.basis_x());
        let f = &(&(&a1.pow(2) * &x) - &(&a0 * &a2)) + &Poly::constant(&ctx, ctx.from_int(2));
        let text = f.to_text();
        assert_eq!(text, "(x)*a1^2 + 2*a0*a2 + 2");
        assert_eq!(Poly::parse(&ctx, &text).unwrap(), f);
        assert_eq!(Poly::parse(&ctx, "a1^2 - a0*a2").unwrap(), &a1.pow(2) - &(&a0 * &a2));
        assert_eq!(Poly::from_json(&ctx, &f.to_json()).unwrap(), f);
        assert_eq!(
            f.to_json(),
            r#"[{"e0":0,"e1":2,"e2":0,"coeff":[0,1]},{"e0":1,"e1":0,"e2":1,"coeff":[2,0]},{"e0":0,"e1":0,"e2":0,"coeff":[2,0]}]"#
        );
        assert_eq!(Poly::zero(&ctx).to_text(), "0");
    }
}
