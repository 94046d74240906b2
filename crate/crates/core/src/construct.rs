//! The invariants of the binary quadratic form and their relations.
//!
//! * `beta = prod_c (a1 + c a0)` and `gamma_k = prod_c (a2 + 2c a1 + (c^2 - k) a0)`
//!   are orbit products under `P = {sigma_c}`.
//! * `Delta = a1^2 - a0 a2`, `J = a0 gamma_0`,
//!   `Gamma = prod_{k nonresidue} gamma_k`, `B = beta prod_{k residue} gamma_k`.
//!
//! `{a0, Delta, beta, gamma_0}` generate the `P`-invariants and
//! `{Delta, J, Gamma, B}` the `SL_2(F_q)`-invariants, each subject to one relation.

use std::sync::Arc;

use crate::action::{enumerate_p, generators_sl2, GroupElem};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, GfElem};
use crate::poly::{Monomial, Poly, Var};
use crate::sagbi::{subduct, Expression, GenSet};

pub const NAME_A0: &str = "a0";
pub const NAME_DELTA: &str = "Delta";
pub const NAME_BETA: &str = "beta";
pub const NAME_GAMMA0: &str = "gamma0";
pub const NAME_J: &str = "J";
pub const NAME_GAMMA: &str = "Gamma";
pub const NAME_B: &str = "B";

/// `(q - 1) / 2`.
pub fn half_order(ctx: &FieldCtx) -> u32 {
    (ctx.q() - 1) / 2
}

/// The `P`-invariant generators; cheap enough to build at every supported `q`.
#[derive(Debug, Clone)]
pub struct PInvariants {
    pub ctx: Arc<FieldCtx>,
    pub a0: Poly,
    pub delta: Poly,
    pub beta: Poly,
    pub gamma0: Poly,
}

#[derive(Debug, Clone)]
pub struct InvariantSet {
    pub p: PInvariants,
    /// `gamma_k` for every `k`, in enumeration order of `k`.
    pub gamma: Vec<(GfElem, Poly)>,
    pub big_gamma: Poly,
    pub b: Poly,
    pub j: Poly,
}

/// `a2 + 2c a1 + (c^2 - k) a0`, the image of `a2 - k a0` under `sigma_c`.
pub fn gamma_factor(ctx: &Arc<FieldCtx>, c: GfElem, k: GfElem) -> Poly {
    let two_c = ctx.mul(ctx.from_int(2), c);
    let shift = ctx.sub(ctx.mul(c, c), k);
    Poly::linear(ctx, [shift, two_c, GfElem::ONE])
}

/// Product of the `P`-orbit of a polynomial, one factor per `c`.
pub fn p_orbit_product(ctx: &Arc<FieldCtx>, f: &Poly) -> Result<Poly> {
    let mut acc = Poly::one(ctx);
    for g in enumerate_p(ctx) {
        acc = acc.try_mul(&g.apply(f)?)?;
    }
    Ok(acc)
}

fn vars(ctx: &Arc<FieldCtx>) -> (Poly, Poly, Poly) {
    (Poly::var(ctx, Var::A0), Poly::var(ctx, Var::A1), Poly::var(ctx, Var::A2))
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::IdentityFailed(what()))
    }
}

fn ensure_lead(name: &str, f: &Poly, expected: Monomial) -> Result<()> {
    let lm = f.lead_monomial()?;
    ensure(lm == expected, || format!("LM({name}) = {lm}, expected {expected}"))
}

fn ensure_degree(name: &str, f: &Poly, expected: u32) -> Result<()> {
    let d = f.degree().unwrap_or(0);
    ensure(f.is_homogeneous() && d == expected, || format!("{name} has degree {d}, expected homogeneous degree {expected}"))
}

fn ensure_weight(name: &str, f: &Poly, expected: u64) -> Result<()> {
    let m = f.ctx().q() - 1;
    let w = f.is_isobaric();
    ensure(w.map(|w| w.value() as u64) == Some(expected % m as u64), || {
        format!("{name} should be isobaric of weight {expected} mod {m}, got {w:?}")
    })
}

impl PInvariants {
    pub fn build(ctx: &Arc<FieldCtx>) -> Result<PInvariants> {
        let q = ctx.q();
        let (a0, a1, a2) = vars(ctx);
        let delta = &(&a1 * &a1) - &(&a0 * &a2);
        let beta = p_orbit_product(ctx, &a1)?;
        let gamma0 = p_orbit_product(ctx, &a2)?;

        let closed = &a1.pow(q) - &(&a0.pow(q - 1) * &a1);
        ensure(beta == closed, || format!("beta = {beta} differs from a1^q - a0^(q-1)*a1"))?;
        ensure_degree(NAME_DELTA, &delta, 2)?;
        ensure_degree(NAME_BETA, &beta, q)?;
        ensure_degree(NAME_GAMMA0, &gamma0, q)?;
        ensure_lead(NAME_DELTA, &delta, Monomial::new(0, 2, 0))?;
        ensure_lead(NAME_BETA, &beta, Monomial::new(0, q, 0))?;
        ensure_lead(NAME_GAMMA0, &gamma0, Monomial::new(0, 0, q))?;
        ensure_weight(NAME_DELTA, &delta, 2)?;
        ensure_weight(NAME_BETA, &beta, 1)?;
        ensure_weight(NAME_GAMMA0, &gamma0, 2)?;
        Ok(PInvariants { ctx: ctx.clone(), a0, delta, beta, gamma0 })
    }

    /// `{a0, Delta, beta, gamma0}`.
    pub fn genset(&self) -> GenSet {
        GenSet::new([
            (NAME_A0, self.a0.clone()),
            (NAME_DELTA, self.delta.clone()),
            (NAME_BETA, self.beta.clone()),
            (NAME_GAMMA0, self.gamma0.clone()),
        ])
        .expect("P generators are nonzero")
    }

    /// `{a0, Delta, gamma0}`.
    pub fn hsop(&self) -> [(&'static str, &Poly); 3] {
        [(NAME_A0, &self.a0), (NAME_DELTA, &self.delta), (NAME_GAMMA0, &self.gamma0)]
    }

    pub fn named(&self) -> Vec<(&'static str, &Poly)> {
        vec![(NAME_A0, &self.a0), (NAME_DELTA, &self.delta), (NAME_BETA, &self.beta), (NAME_GAMMA0, &self.gamma0)]
    }

    /// `zeta = a0^q gamma + Delta (Delta^((q-1)/2) - a0^(q-1))^2`.
    pub fn zeta(&self, gamma: &Poly) -> Poly {
        let q = self.ctx.q();
        let inner = &self.delta.pow(half_order(&self.ctx)) - &self.a0.pow(q - 1);
        &(&self.a0.pow(q) * gamma) + &(&self.delta * &inner.pow(2))
    }

    /// `beta^2 - zeta(gamma)`; zero for `gamma = gamma_0`.
    pub fn p_relation_residual(&self, gamma: &Poly) -> Poly {
        &self.beta.pow(2) - &self.zeta(gamma)
    }
}

impl InvariantSet {
    pub fn build(ctx: &Arc<FieldCtx>) -> Result<InvariantSet> {
        let q = ctx.q();
        let p = PInvariants::build(ctx)?;
        let (a0, _, a2) = vars(ctx);

        let mut gamma = Vec::with_capacity(q as usize);
        for k in ctx.enumerate() {
            let base = &a2 - &a0.scale(k);
            gamma.push((k, p_orbit_product(ctx, &base)?));
        }
        ensure(gamma[0].1 == p.gamma0, || "gamma_0 from the k-family differs from gamma0".into())?;

        // Gamma and B are accumulated one linear factor at a time.
        let mut big_gamma = Poly::one(ctx);
        for k in ctx.nonresidues() {
            for c in ctx.enumerate() {
                big_gamma = big_gamma.try_mul(&gamma_factor(ctx, c, k))?;
            }
        }
        let mut b = p.beta.clone();
        for k in ctx.residues() {
            for c in ctx.enumerate() {
                b = b.try_mul(&gamma_factor(ctx, c, k))?;
            }
        }
        let j = &a0 * &p.gamma0;

        let n = q * (q - 1) / 2;
        for (k, g) in &gamma {
            ensure_degree(&format!("gamma_{}", ctx.format(*k)), g, q)?;
        }
        ensure_degree(NAME_GAMMA, &big_gamma, n)?;
        ensure_degree(NAME_B, &b, q + n)?;
        ensure_degree(NAME_J, &j, q + 1)?;
        ensure_lead(NAME_J, &j, Monomial::new(1, 0, q))?;
        ensure_lead(NAME_GAMMA, &big_gamma, Monomial::new(0, 0, n))?;
        ensure_lead(NAME_B, &b, Monomial::new(0, q, n))?;
        ensure_weight(NAME_J, &j, 2)?;
        ensure_weight(NAME_GAMMA, &big_gamma, 2 * half_order(ctx) as u64)?;
        ensure_weight(NAME_B, &b, 1 + 2 * half_order(ctx) as u64)?;
        Ok(InvariantSet { p, gamma, big_gamma, b, j })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.p.ctx
    }

    pub fn gamma_k(&self, k: GfElem) -> &Poly {
        &self.gamma[k.code() as usize].1
    }

    /// `{Delta, J, Gamma, B}`.
    pub fn sl2_genset(&self) -> GenSet {
        GenSet::new([
            (NAME_DELTA, self.p.delta.clone()),
            (NAME_J, self.j.clone()),
            (NAME_GAMMA, self.big_gamma.clone()),
            (NAME_B, self.b.clone()),
        ])
        .expect("SL2 generators are nonzero")
    }

    /// `{Delta, J, Gamma}`, the homogeneous system of parameters.
    pub fn hsop_genset(&self) -> GenSet {
        GenSet::new([
            (NAME_DELTA, self.p.delta.clone()),
            (NAME_J, self.j.clone()),
            (NAME_GAMMA, self.big_gamma.clone()),
        ])
        .expect("hsop generators are nonzero")
    }

    pub fn sl2_named(&self) -> Vec<(&'static str, &Poly)> {
        vec![(NAME_DELTA, &self.p.delta), (NAME_J, &self.j), (NAME_GAMMA, &self.big_gamma), (NAME_B, &self.b)]
    }
}

#[derive(Debug, Clone)]
pub struct InvarianceEntry {
    pub invariant: String,
    pub generator: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct InvarianceReport {
    pub entries: Vec<InvarianceEntry>,
}

impl InvarianceReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> Vec<&InvarianceEntry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }
}

fn generator_label(ctx: &FieldCtx, g: &GroupElem) -> String {
    let m = g.matrix();
    if m[0][0] == GfElem::ONE && m[1][0].is_zero() && m[1][1] == GfElem::ONE {
        format!("sigma_{}", ctx.format(m[0][1]))
    } else if *g == GroupElem::tau(g.ctx()) {
        "tau".into()
    } else {
        format!("{g:?}")
    }
}

/// Applies every generator to every named polynomial.
pub fn check_invariance(named: &[(&str, &Poly)], generators: &[GroupElem]) -> Result<InvarianceReport> {
    let mut report = InvarianceReport::default();
    for (name, f) in named {
        for g in generators {
            report.entries.push(InvarianceEntry {
                invariant: name.to_string(),
                generator: generator_label(g.ctx(), g),
                pass: g.apply(f)? == **f,
            });
        }
    }
    Ok(report)
}

/// `{a0, Delta, beta, gamma0}` under every `sigma_c`.
pub fn verify_p_invariance(p: &PInvariants) -> Result<InvarianceReport> {
    check_invariance(&p.named(), &enumerate_p(&p.ctx))
}

/// `{Delta, J, Gamma, B}` under every `sigma_c` and `tau`.
pub fn verify_sl2_invariance(inv: &InvariantSet) -> Result<InvarianceReport> {
    check_invariance(&inv.sl2_named(), &generators_sl2(inv.ctx()))
}

/// `beta^2 = a0^q gamma0 + Delta (Delta^((q-1)/2) - a0^(q-1))^2`, together with
/// the vanishing of the right-hand side at `a1 = 0`.
pub fn verify_p_relation(p: &PInvariants) -> Result<()> {
    let zeta = p.zeta(&p.gamma0);
    let at_zero = zeta.substitute(Var::A1, &Poly::zero(&p.ctx))?;
    if !at_zero.is_zero() {
        return Err(Error::NonzeroResidual { identity: "zeta|_{a1=0} = 0".into(), residual: Box::new(at_zero) });
    }
    let residual = &p.beta.pow(2) - &zeta;
    if !residual.is_zero() {
        return Err(Error::NonzeroResidual {
            identity: "beta^2 = a0^q*gamma0 + Delta*(Delta^((q-1)/2) - a0^(q-1))^2".into(),
            residual: Box::new(residual),
        });
    }
    Ok(())
}

/// `Phi` with `B^2 = Delta^q Gamma^2 + J Phi(Delta, J, Gamma)`.
#[derive(Debug, Clone)]
pub struct Phi {
    pub expr: Expression,
    /// `(B^2 - Delta^q Gamma^2) / J` as a polynomial in `a0, a1, a2`.
    pub quotient: Poly,
    pub subduction_steps: usize,
}

impl Phi {
    pub fn uses_gamma(&self) -> bool {
        self.expr.uses(NAME_GAMMA)
    }
}

/// `B^2 - Delta^q Gamma^2`.
pub fn sl2_relation_lhs(inv: &InvariantSet) -> Poly {
    let q = inv.ctx().q();
    &inv.b.pow(2) - &(&inv.p.delta.pow(q) * &inv.big_gamma.pow(2))
}

/// Divides `B^2 - Delta^q Gamma^2` by `J` and expresses the quotient in
/// `Delta, J, Gamma` by subduction.
pub fn compute_phi(inv: &InvariantSet) -> Result<Phi> {
    let ctx = inv.ctx();
    let r = sl2_relation_lhs(inv);
    let mod_a0 = r.substitute(Var::A0, &Poly::zero(ctx))?;
    if !mod_a0.is_zero() {
        return Err(Error::NonzeroResidual {
            identity: "B^2 - Delta^q*Gamma^2 = 0 mod a0".into(),
            residual: Box::new(mod_a0),
        });
    }
    let quotient = r.exact_divide(&inv.j)?;
    let hsop = inv.hsop_genset();
    let sub = subduct(&quotient, &hsop)?;
    if !sub.remainder.is_zero() {
        return Err(Error::NonzeroResidual {
            identity: "(B^2 - Delta^q*Gamma^2)/J subducts to 0 over {Delta, J, Gamma}".into(),
            residual: Box::new(sub.remainder),
        });
    }
    let rebuilt = &(&inv.p.delta.pow(ctx.q()) * &inv.big_gamma.pow(2)) + &(&inv.j * &sub.expr.eval(&hsop)?);
    let diff = &inv.b.pow(2) - &rebuilt;
    if !diff.is_zero() {
        return Err(Error::NonzeroResidual {
            identity: "B^2 = Delta^q*Gamma^2 + J*Phi".into(),
            residual: Box::new(diff),
        });
    }
    Ok(Phi { expr: sub.expr, quotient, subduction_steps: sub.steps })
}

#[derive(Debug, Clone)]
pub struct ParityDecomposition {
    pub even: Poly,
    pub odd: Poly,
    /// `odd / B`.
    pub odd_quotient: Poly,
}

/// Splits an `SL_2`-invariant by weight parity, certifying both parts
/// invariant and the odd part divisible by `B`.
pub fn parity_decompose_invariant(f: &Poly, inv: &InvariantSet) -> Result<ParityDecomposition> {
    let gens = generators_sl2(inv.ctx());
    let not_fixed = |f: &Poly| -> Result<Option<String>> {
        for g in &gens {
            if g.apply(f)? != *f {
                return Ok(Some(generator_label(inv.ctx(), g)));
            }
        }
        Ok(None)
    };
    if let Some(g) = not_fixed(f)? {
        return Err(Error::NotInvariant(format!("input moved by {g}")));
    }
    let (even, odd) = f.parity_split();
    for (label, part) in [("even part", &even), ("odd part", &odd)] {
        if let Some(g) = not_fixed(part)? {
            return Err(Error::NotInvariant(format!("{label} moved by {g}")));
        }
    }
    let odd_quotient = odd.exact_divide(&inv.b)?;
    Ok(ParityDecomposition { even, odd, odd_quotient })
}

/// Checks that `tau` maps each linear factor `a2 + 2c a1 + (c^2 - k) a0` of
/// `Gamma` to `(c^2 - k)` times the factor with `c' = -c/(c^2 - k)` and
/// `k' = k/(c^2 - k)^2`, where `k'` is again a nonresidue.
pub fn verify_tau_permutes_gamma_factors(ctx: &Arc<FieldCtx>) -> Result<()> {
    let tau = GroupElem::tau(ctx);
    for k in ctx.nonresidues() {
        for c in ctx.enumerate() {
            let s = ctx.sub(ctx.mul(c, c), k);
            let s_inv = ctx.inv(s)?;
            let c2 = ctx.neg(ctx.mul(c, s_inv));
            let k2 = ctx.mul(k, ctx.mul(s_inv, s_inv));
            ensure(!ctx.is_quadratic_residue(k2)?, || format!("k' = {} is a residue", ctx.format(k2)))?;
            let image = tau.apply(&gamma_factor(ctx, c, k))?;
            let expected = gamma_factor(ctx, c2, k2).scale(s);
            ensure(image == expected, || {
                format!("tau image of factor (c={}, k={}) is {image}, expected {expected}", ctx.format(c), ctx.format(k))
            })?;
        }
    }
    Ok(())
}

/// For every unit `w` and each named polynomial, `rho_w` scales it by `w^weight`.
pub fn verify_rho_scaling(named: &[(&str, &Poly)]) -> Result<()> {
    let Some((_, first)) = named.first() else { return Ok(()) };
    let ctx = first.ctx().clone();
    for (name, f) in named {
        let w = f
            .is_isobaric()
            .ok_or_else(|| Error::IdentityFailed(format!("{name} is not isobaric")))?;
        for omega in ctx.units() {
            let rho = GroupElem::rho(&ctx, omega)?;
            let expected = f.scale(ctx.pow(omega, w.value() as u64));
            ensure(rho.apply(f)? == expected, || {
                format!("rho_{} does not scale {name} by w^{}", ctx.format(omega), w.value())
            })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: i64, n: i64) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, n).unwrap())
    }

    #[test]
    fn q3_closed_forms() {
        let ctx = field(3, 1);
        let inv = InvariantSet::build(&ctx).unwrap();
        assert_eq!(inv.p.beta.to_text(), "a1^3 + 2*a0^2*a1");
        // (a2)(a2 + 2a1 + a0)(a2 + a1 + a0) over F_3
        let expected = Poly::parse(&ctx, "a2^3 + 2*a0*a2^2 + 2*a1^2*a2 + a0^2*a2").unwrap();
        assert_eq!(inv.p.gamma0, expected);
        assert_eq!(ctx.nonresidues(), vec![ctx.from_int(2)]);
        assert_eq!(inv.big_gamma, *inv.gamma_k(ctx.from_int(2)));
    }

    #[test]
    fn quadratic_residue_product_identity() {
        // prod_{s in Q} (y - s) = y^((q-1)/2) - 1, with y = a0
        for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let ctx = field(p, n);
            let y = Poly::var(&ctx, Var::A0);
            let mut prod = Poly::one(&ctx);
            for s in ctx.residues() {
                prod = &prod * &(&y - &Poly::constant(&ctx, s));
            }
            assert_eq!(prod, &y.pow(half_order(&ctx)) - &Poly::one(&ctx));
        }
    }

    #[test]
    fn gamma0_at_a1_zero() {
        for p in [3, 5, 7] {
            let ctx = field(p, 1);
            let pinv = PInvariants::build(&ctx).unwrap();
            let (a0, _, a2) = vars(&ctx);
            let h = half_order(&ctx);
            let expected = &a2 * &(&(-&a2).pow(h) - &a0.pow(h)).pow(2);
            assert_eq!(pinv.gamma0.substitute(Var::A1, &Poly::zero(&ctx)).unwrap(), expected);
        }
    }

    #[test]
    fn p_relation_and_negative_control() {
        let ctx = field(3, 1);
        let inv = InvariantSet::build(&ctx).unwrap();
        verify_p_relation(&inv.p).unwrap();
        let gamma1 = inv.gamma_k(ctx.from_int(1));
        assert!(!inv.p.p_relation_residual(gamma1).is_zero());
    }

    #[test]
    fn invariance_and_beta_tau_control() {
        let ctx = field(5, 1);
        let inv = InvariantSet::build(&ctx).unwrap();
        assert!(verify_p_invariance(&inv.p).unwrap().pass());
        assert!(verify_sl2_invariance(&inv).unwrap().pass());
        let tau = GroupElem::tau(&ctx);
        assert_eq!(tau.apply(&inv.p.delta).unwrap(), inv.p.delta);
        let beta_ctx = field(3, 1);
        let b3 = PInvariants::build(&beta_ctx).unwrap();
        let report = check_invariance(&[(NAME_BETA, &b3.beta)], &[GroupElem::tau(&beta_ctx)]).unwrap();
        assert!(!report.pass());
        assert_eq!(report.failures()[0].generator, "tau");
    }

    #[test]
    fn phi_for_small_q() {
        for (p, gamma_free) in [(3, true), (5, false)] {
            let ctx = field(p, 1);
            let inv = InvariantSet::build(&ctx).unwrap();
            let phi = compute_phi(&inv).unwrap();
            assert!(!phi.expr.is_zero());
            if gamma_free {
                assert!(!phi.uses_gamma(), "Phi = {}", phi.expr.to_text());
            }
        }
    }

    #[test]
    fn parity_decomposition_examples() {
        let ctx = field(3, 1);
        let inv = InvariantSet::build(&ctx).unwrap();
        let d = parity_decompose_invariant(&inv.b, &inv).unwrap();
        assert!(d.even.is_zero());
        assert_eq!(d.odd, inv.b);
        assert_eq!(d.odd_quotient, Poly::one(&ctx));

        let f = &inv.p.delta + &inv.b;
        let d = parity_decompose_invariant(&f, &inv).unwrap();
        assert_eq!(d.even, inv.p.delta);
        assert_eq!(d.odd, inv.b);

        let a1 = Poly::var(&ctx, Var::A1);
        assert!(matches!(parity_decompose_invariant(&a1, &inv), Err(Error::NotInvariant(_))));

        let ctx5 = field(5, 1);
        let inv5 = InvariantSet::build(&ctx5).unwrap();
        let f = &inv5.p.delta * &inv5.b;
        let d = parity_decompose_invariant(&f, &inv5).unwrap();
        assert!(d.even.is_zero());
        assert_eq!(d.odd_quotient, inv5.p.delta);
    }

    #[test]
    fn tau_permutes_gamma_factors() {
        for (p, n) in [(3, 1), (5, 1), (7, 1)] {
            verify_tau_permutes_gamma_factors(&field(p, n)).unwrap();
        }
    }

    #[test]
    fn rho_scaling_of_constructed_invariants() {
        let ctx = field(7, 1);
        let inv = InvariantSet::build(&ctx).unwrap();
        let mut named = inv.p.named();
        named.extend(inv.sl2_named());
        verify_rho_scaling(&named).unwrap();
    }
}
