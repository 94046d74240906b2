//! Verification runs: a fixed sequence of named checks, each recording the
//! statement it verifies, a pass flag and a short detail string.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::action::GroupElem;
use crate::construct::{
    self, compute_phi, half_order, parity_decompose_invariant, sl2_relation_lhs, verify_p_invariance,
    verify_rho_scaling, verify_sl2_invariance, verify_tau_permutes_gamma_factors, InvariantSet, PInvariants, Phi,
};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, GfElem, DEFAULT_MAX_Q};
use crate::oracle::{self, check_budget, compare, invariant_basis, DimTable, GroupTag};
use crate::poly::{Monomial, Poly, Var};
use crate::sagbi::{certify_sagbi, membership, subduct, GenSet, Membership, SagbiReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CheckKind {
    #[serde(rename = "p-relation")]
    PRelation,
    #[serde(rename = "sl2-relation")]
    Sl2Relation,
    #[serde(rename = "invariance")]
    Invariance,
    #[serde(rename = "sagbi")]
    Sagbi,
    #[serde(rename = "hilbert")]
    Hilbert,
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "parity")]
    Parity,
}

impl CheckKind {
    /// Execution order.
    pub const ALL: [CheckKind; 7] = [
        CheckKind::PRelation,
        CheckKind::Sl2Relation,
        CheckKind::Invariance,
        CheckKind::Sagbi,
        CheckKind::Hilbert,
        CheckKind::Phi,
        CheckKind::Parity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::PRelation => "p-relation",
            CheckKind::Sl2Relation => "sl2-relation",
            CheckKind::Invariance => "invariance",
            CheckKind::Sagbi => "sagbi",
            CheckKind::Hilbert => "hilbert",
            CheckKind::Phi => "phi",
            CheckKind::Parity => "parity",
        }
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<CheckKind> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown check '{s}'")))
    }
}

/// Parses a comma separated check list such as `p-relation,sagbi`.
pub fn parse_checks(list: &str) -> Result<Vec<CheckKind>> {
    let mut out: Vec<CheckKind> = list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: i64,
    pub n: i64,
    /// Oracle degree budget; `None` picks [`oracle::default_max_degree`].
    pub max_degree: Option<u32>,
    pub checks: Vec<CheckKind>,
    #[serde(skip)]
    pub max_q: u64,
    /// Record wall-clock time in the report.
    #[serde(skip)]
    pub timing: bool,
}

impl RunConfig {
    pub fn new(p: i64, n: i64) -> RunConfig {
        RunConfig { p, n, max_degree: None, checks: CheckKind::ALL.to_vec(), max_q: DEFAULT_MAX_Q, timing: true }
    }

    pub fn field(&self) -> Result<Arc<FieldCtx>> {
        Ok(Arc::new(FieldCtx::with_cap(self.p, self.n, self.max_q)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The statement being verified.
    pub paper_anchor: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub p: i64,
    pub n: i64,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub omega: Vec<u32>,
    pub max_degree: u32,
    pub checks: Vec<CheckKind>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigRecord,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "invforge verify: p={} n={} q={} max-degree={}", c.p, c.n, c.q, c.max_degree);
        for r in &self.checks {
            let _ = writeln!(s, "[{}] {} | {} | {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.paper_anchor, r.detail);
        }
        let failed = self.checks.iter().filter(|r| !r.pass).count();
        let _ = writeln!(s, "{} checks, {} failed", self.checks.len(), failed);
        s
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn push(&mut self, name: &str, anchor: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), paper_anchor: anchor.into(), pass, detail: detail.into() });
    }

    /// Records an `Ok` as a pass and an `Err` as a failure carrying the message.
    fn outcome(&mut self, name: &str, anchor: &str, r: Result<String>) {
        match r {
            Ok(detail) => self.push(name, anchor, true, detail),
            Err(e) => self.push(name, anchor, false, e.to_string()),
        }
    }
}

/// Statements, used as the `paper_anchor` of each check.
pub mod anchors {
    pub const INDUCED: &str = "induced action on (a2,a1,a0): sigma_c -> [[1,2c,c^2],[0,1,c],[0,0,1]], rho_w -> diag(w^2,w,1), tau -> antidiag(1,-1,1)";
    pub const P_RELATION: &str = "beta^2 = a0^q*gamma0 + Delta*(Delta^((q-1)/2) - a0^(q-1))^2";
    pub const ZETA_A1_ZERO: &str = "a0^q*gamma0 + Delta*(Delta^((q-1)/2) - a0^(q-1))^2 vanishes at a1 = 0";
    pub const RESIDUE_PRODUCT: &str = "prod over residues s of (y - s) = y^((q-1)/2) - 1";
    pub const P_RELATION_CONTROL: &str = "negative control: the relation fails with gamma_1 in place of gamma_0";
    pub const SL2_MOD_A0: &str = "B^2 - Delta^q*Gamma^2 is zero modulo a0";
    pub const SL2_DIV_J: &str = "J divides B^2 - Delta^q*Gamma^2";
    pub const P_INVARIANCE: &str = "a0, Delta, beta, gamma0 are P-invariant";
    pub const SL2_INVARIANCE: &str = "Delta, J, Gamma, B are fixed by P and tau, hence SL2(F_q)-invariant";
    pub const TAU_CONTROL: &str = "negative control: beta is not fixed by tau";
    pub const TAU_PERMUTES: &str = "tau permutes the linear factors of Gamma: k/(c^2-k)^2 is a nonresidue";
    pub const LEAD_TERMS: &str = "LM(Delta)=a1^2, LM(J)=a0*a2^q, LM(Gamma)=a2^(q(q-1)/2), LM(B)=a1^q*a2^(q(q-1)/2)";
    pub const WEIGHTS: &str = "wt(a_i) = i: Delta and gamma0 isobaric of weight 2, beta of weight 1";
    pub const RHO_SCALING: &str = "(f)rho_w = w^wt(f) f for isobaric f";
    pub const P_SAGBI: &str = "{a0, Delta, beta, gamma0} is a SAGBI basis; single tete-a-tete beta^2 - Delta^q";
    pub const SL2_SAGBI: &str = "{Delta, J, Gamma, B} is a SAGBI basis; single tete-a-tete B^2 - Delta^q*Gamma^2";
    pub const P_HSOP: &str = "lead monomials of {a0, Delta, gamma0} are a0, a1^2, a2^q (hsop)";
    pub const P_HILBERT: &str = "F[V]^P = F[a0,Delta,gamma0] + beta*F[a0,Delta,gamma0]";
    pub const SL2_HILBERT: &str = "F[V]^SL2 = A + B*A with A = F[Delta, J, Gamma]";
    pub const DEGREE_PRODUCT: &str = "deg(Delta)*deg(J)*deg(Gamma) = |SL2(F_q)|";
    pub const RANK: &str = "F[V]^SL2 is a free A-module of rank 2";
    pub const BASIS_SUBDUCTS: &str = "every oracle invariant subducts to zero over the SAGBI basis";
    pub const PHI: &str = "B^2 = Delta^q*Gamma^2 + J*Phi(Delta, J, Gamma)";
    pub const PHI_MEMBERSHIP: &str = "B^2 subducts over {Delta, J, Gamma, B} to Delta^q*Gamma^2 + J*Phi";
    pub const PHI_PARITY: &str = "Gamma does not appear in Phi when (q-1)/2 is odd";
    pub const PARITY_SPLIT: &str = "even and odd weight parts of an invariant are invariant; odd part divisible by B";
}

fn residual_detail(f: &Poly) -> String {
    if f.is_zero() {
        "residual 0".into()
    } else {
        format!("residual has {} terms, lead {}", f.num_terms(), f.lead_monomial().map(|m| m.to_string()).unwrap_or_default())
    }
}

fn sagbi_detail(report: &SagbiReport) -> String {
    let pairs: Vec<String> = report
        .witnesses
        .iter()
        .map(|w| {
            format!(
                "u={:?} v={:?} deg {} ({} steps, {})",
                w.tete.u,
                w.tete.v,
                w.tete.degree,
                w.subduction.steps,
                if w.pass { "remainder 0" } else { "nonzero remainder" }
            )
        })
        .collect();
    format!("certified up to degree {}: {} tete-a-tete(s) {}", report.degree_bound, report.witnesses.len(), pairs.join("; "))
}

fn single_expected_pair(report: &SagbiReport, u: &[u32], v: &[u32]) -> bool {
    report.witnesses.len() == 1 && report.witnesses[0].tete.u == u && report.witnesses[0].tete.v == v && report.pass()
}

fn table_detail(t: &DimTable) -> String {
    let mismatches: Vec<u32> = t.rows.iter().filter(|r| !r.pass).map(|r| r.degree).collect();
    format!(
        "hypersurface series; degrees {}..={}: observed {:?}, predicted {:?}{}",
        t.rows.first().map(|r| r.degree).unwrap_or(0),
        t.max_degree,
        t.observed(),
        t.predicted(),
        if mismatches.is_empty() { String::new() } else { format!(", mismatch at {mismatches:?}") }
    )
}

/// Runs the selected checks. Configuration problems are errors; failing
/// checks are recorded in the report.
pub fn run_verify(cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let ctx = cfg.field()?;
    let q = ctx.q();
    let max_degree = cfg.max_degree.unwrap_or_else(|| oracle::default_max_degree(&ctx));
    let wants = |k: CheckKind| cfg.checks.contains(&k);
    if wants(CheckKind::Hilbert) {
        check_budget(&ctx, q as usize + 1, max_degree)?;
    }

    let mut rec = Recorder { checks: Vec::new() };
    rec.outcome("action/induced-matrices", anchors::INDUCED, check_induced_displays(&ctx));

    let needs_full = cfg.checks.iter().any(|k| *k != CheckKind::PRelation);
    let pinv = PInvariants::build(&ctx)?;
    let full = if needs_full { Some(InvariantSet::build(&ctx)?) } else { None };
    let mut phi: Option<Result<Phi>> = None;

    for kind in CheckKind::ALL.into_iter().filter(|k| wants(*k)) {
        match kind {
            CheckKind::PRelation => p_relation_checks(&mut rec, &ctx, &pinv)?,
            CheckKind::Sl2Relation => sl2_relation_checks(&mut rec, full.as_ref().unwrap()),
            CheckKind::Invariance => invariance_checks(&mut rec, &ctx, full.as_ref().unwrap())?,
            CheckKind::Sagbi => sagbi_checks(&mut rec, &ctx, full.as_ref().unwrap())?,
            CheckKind::Hilbert => hilbert_checks(&mut rec, &ctx, full.as_ref().unwrap(), max_degree)?,
            CheckKind::Phi => {
                let inv = full.as_ref().unwrap();
                let computed = phi.get_or_insert_with(|| compute_phi(inv));
                phi_checks(&mut rec, inv, computed)?;
            }
            CheckKind::Parity => {
                let inv = full.as_ref().unwrap();
                let computed = phi.get_or_insert_with(|| compute_phi(inv));
                parity_checks(&mut rec, inv, computed)?;
            }
        }
    }

    Ok(Report {
        config: ConfigRecord {
            p: cfg.p,
            n: cfg.n,
            q,
            modulus: ctx.modulus().to_vec(),
            omega: ctx.coords(ctx.omega()),
            max_degree,
            checks: cfg.checks.clone(),
        },
        checks: rec.checks,
        elapsed_ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

/// Re-derives the induced matrices of `sigma_c`, `rho_omega` and `tau` and
/// compares them with their closed forms.
pub fn check_induced_displays(ctx: &Arc<FieldCtx>) -> Result<String> {
    let z = GfElem::ZERO;
    let one = GfElem::ONE;
    for c in ctx.enumerate() {
        let two_c = ctx.mul(ctx.from_int(2), c);
        let expected = [[one, two_c, ctx.mul(c, c)], [z, one, c], [z, z, one]];
        if *GroupElem::sigma(ctx, c).induced() != expected {
            return Err(Error::IdentityFailed(format!("induced matrix of sigma_{}", ctx.format(c))));
        }
    }
    let w = ctx.omega();
    if *GroupElem::rho(ctx, w)?.induced() != [[ctx.mul(w, w), z, z], [z, w, z], [z, z, one]] {
        return Err(Error::IdentityFailed("induced matrix of rho_omega".into()));
    }
    if *GroupElem::tau(ctx).induced() != [[z, z, one], [z, ctx.neg(one), z], [one, z, z]] {
        return Err(Error::IdentityFailed("induced matrix of tau".into()));
    }
    Ok(format!("{} sigma_c, rho_omega and tau match", ctx.q()))
}

fn p_relation_checks(rec: &mut Recorder, ctx: &Arc<FieldCtx>, p: &PInvariants) -> Result<()> {
    let residual = p.p_relation_residual(&p.gamma0);
    rec.push("p-relation", anchors::P_RELATION, residual.is_zero(), residual_detail(&residual));

    let at_zero = p.zeta(&p.gamma0).substitute(Var::A1, &Poly::zero(ctx))?;
    rec.push("p-relation/a1-substitution", anchors::ZETA_A1_ZERO, at_zero.is_zero(), residual_detail(&at_zero));

    let y = Poly::var(ctx, Var::A0);
    let prod = ctx.residues().into_iter().fold(Poly::one(ctx), |acc, s| &acc * &(&y - &Poly::constant(ctx, s)));
    let ok = prod == &y.pow(half_order(ctx)) - &Poly::one(ctx);
    rec.push("p-relation/residue-product", anchors::RESIDUE_PRODUCT, ok, format!("{} residues", ctx.residues().len()));

    let a0 = Poly::var(ctx, Var::A0);
    let gamma1 = construct::p_orbit_product(ctx, &(&Poly::var(ctx, Var::A2) - &a0))?;
    let perturbed = p.p_relation_residual(&gamma1);
    rec.push(
        "p-relation/negative-control",
        anchors::P_RELATION_CONTROL,
        !perturbed.is_zero(),
        format!("perturbed residual has {} terms", perturbed.num_terms()),
    );
    Ok(())
}

fn sl2_relation_checks(rec: &mut Recorder, inv: &InvariantSet) {
    let r = sl2_relation_lhs(inv);
    let mod_a0 = r.substitute(Var::A0, &Poly::zero(inv.ctx()));
    rec.outcome(
        "sl2-relation/mod-a0",
        anchors::SL2_MOD_A0,
        mod_a0.and_then(|m| if m.is_zero() { Ok("reduction mod a0 is 0".into()) } else { Err(Error::IdentityFailed(residual_detail(&m))) }),
    );
    rec.outcome(
        "sl2-relation/divisible-by-J",
        anchors::SL2_DIV_J,
        r.exact_divide(&inv.j).map(|quot| format!("quotient of degree {} with {} terms", quot.degree().unwrap_or(0), quot.num_terms())),
    );
}

fn invariance_checks(rec: &mut Recorder, ctx: &Arc<FieldCtx>, inv: &InvariantSet) -> Result<()> {
    let q = ctx.q();
    let describe = |r: &construct::InvarianceReport| {
        let fails: Vec<String> = r.failures().iter().map(|e| format!("{} by {}", e.invariant, e.generator)).collect();
        if fails.is_empty() {
            format!("{} (invariant, generator) pairs fixed", r.entries.len())
        } else {
            format!("moved: {}", fails.join(", "))
        }
    };
    let p_report = verify_p_invariance(&inv.p)?;
    rec.push("invariance/P", anchors::P_INVARIANCE, p_report.pass(), describe(&p_report));
    let sl2_report = verify_sl2_invariance(inv)?;
    rec.push("invariance/SL2", anchors::SL2_INVARIANCE, sl2_report.pass(), describe(&sl2_report));

    let moved = GroupElem::tau(ctx).apply(&inv.p.beta)? != inv.p.beta;
    rec.push("invariance/negative-control", anchors::TAU_CONTROL, moved, if moved { "beta moved by tau" } else { "beta fixed by tau" });

    rec.outcome(
        "invariance/tau-permutes-Gamma-factors",
        anchors::TAU_PERMUTES,
        verify_tau_permutes_gamma_factors(ctx).map(|_| format!("{} factors checked", q * (q - 1) / 2)),
    );

    let n = q * (q - 1) / 2;
    let leads = [
        (&inv.p.delta, Monomial::new(0, 2, 0)),
        (&inv.j, Monomial::new(1, 0, q)),
        (&inv.big_gamma, Monomial::new(0, 0, n)),
        (&inv.b, Monomial::new(0, q, n)),
    ];
    let got: Vec<String> = leads.iter().map(|(f, _)| f.lead_monomial().map(|m| m.to_string()).unwrap_or_default()).collect();
    let ok = leads.iter().all(|(f, m)| f.lead_monomial().ok() == Some(*m));
    rec.push("invariance/lead-terms", anchors::LEAD_TERMS, ok, got.join(", "));

    let m = q - 1;
    let weight = |f: &Poly| f.is_isobaric().map(|w| w.value());
    let show = |w: Option<u32>| w.map_or("not isobaric".to_string(), |v| v.to_string());
    let ok = weight(&inv.p.delta) == Some(2 % m) && weight(&inv.p.gamma0) == Some(2 % m) && weight(&inv.p.beta) == Some(1 % m);
    rec.push(
        "invariance/weights",
        anchors::WEIGHTS,
        ok,
        format!(
            "mod {m}: wt(Delta)={} wt(gamma0)={} wt(beta)={}",
            show(weight(&inv.p.delta)),
            show(weight(&inv.p.gamma0)),
            show(weight(&inv.p.beta))
        ),
    );

    let mut named = inv.p.named();
    named.extend(inv.sl2_named().into_iter().filter(|(n, _)| *n != construct::NAME_DELTA));
    rec.outcome(
        "invariance/rho-scaling",
        anchors::RHO_SCALING,
        verify_rho_scaling(&named).map(|_| format!("{} invariants x {} units", named.len(), q - 1)),
    );
    Ok(())
}

fn sagbi_checks(rec: &mut Recorder, ctx: &Arc<FieldCtx>, inv: &InvariantSet) -> Result<()> {
    let q = ctx.q();
    let p_report = certify_sagbi(&inv.p.genset(), 2 * q)?;
    let ok = single_expected_pair(&p_report, &[0, 0, 2, 0], &[0, q, 0, 0]);
    rec.push("sagbi/P", anchors::P_SAGBI, ok, sagbi_detail(&p_report));

    let deg_b = inv.b.degree().unwrap_or(0);
    let sl2_report = certify_sagbi(&inv.sl2_genset(), 2 * deg_b)?;
    let ok = single_expected_pair(&sl2_report, &[0, 0, 0, 2], &[q, 0, 2, 0]);
    rec.push("sagbi/SL2", anchors::SL2_SAGBI, ok, sagbi_detail(&sl2_report));

    let leads: Vec<Monomial> = inv.p.hsop().iter().map(|(_, f)| f.lead_monomial()).collect::<Result<_>>()?;
    let ok = leads == [Monomial::new(1, 0, 0), Monomial::new(0, 2, 0), Monomial::new(0, 0, q)];
    let shown: Vec<String> = leads.iter().map(Monomial::to_string).collect();
    rec.push("sagbi/hsop-lead-monomials", anchors::P_HSOP, ok, shown.join(", "));
    Ok(())
}

fn hilbert_checks(rec: &mut Recorder, ctx: &Arc<FieldCtx>, inv: &InvariantSet, max_degree: u32) -> Result<()> {
    let q = ctx.q() as u64;
    let p_table = compare(ctx, GroupTag::P, max_degree)?;
    rec.push("hilbert/P", anchors::P_HILBERT, p_table.pass(), table_detail(&p_table));
    let sl2_table = compare(ctx, GroupTag::SL2, max_degree)?;
    rec.push("hilbert/SL2", anchors::SL2_HILBERT, sl2_table.pass(), table_detail(&sl2_table));

    let degs: Vec<u64> = [&inv.p.delta, &inv.j, &inv.big_gamma].iter().map(|f| f.degree().unwrap_or(0) as u64).collect();
    let product: u64 = degs.iter().product();
    let order = q * (q * q - 1);
    rec.push("hilbert/degree-product", anchors::DEGREE_PRODUCT, product == order, format!("{degs:?} -> {product}, |SL2| = {order}"));

    // -I acts trivially, so the effective group has order |SL2|/2
    let (rank, source) = match sl2_table.implied_rank() {
        Some(r) => (r, format!("observed numerator {:?}", sl2_table.implied_numerator().unwrap_or_default())),
        None => ((product / (order / 2)) as i64, format!("prod(deg)/|PSL2| (table stops below degree {})", sl2_table.module_gen_degree)),
    };
    rec.push("hilbert/rank", anchors::RANK, rank == 2, format!("rank {rank} from {source}"));

    let mut checked = 0;
    let mut failures = Vec::new();
    for (tag, gens) in [(GroupTag::P, inv.p.genset()), (GroupTag::SL2, inv.sl2_genset())] {
        for d in 0..=max_degree {
            for f in invariant_basis(ctx, &tag.generators(ctx), d)? {
                checked += 1;
                if !subduct(&f, &gens)?.remainder.is_zero() {
                    failures.push(format!("{} degree {d}", tag.label()));
                }
            }
        }
    }
    rec.push(
        "hilbert/basis-subducts",
        anchors::BASIS_SUBDUCTS,
        failures.is_empty(),
        if failures.is_empty() { format!("{checked} basis invariants subduct to 0") } else { failures.join(", ") },
    );
    Ok(())
}

fn phi_checks(rec: &mut Recorder, inv: &InvariantSet, phi: &Result<Phi>) -> Result<()> {
    let phi = match phi {
        Ok(phi) => phi,
        Err(e) => {
            rec.push("phi", anchors::PHI, false, e.to_string());
            return Ok(());
        }
    };
    rec.push(
        "phi",
        anchors::PHI,
        true,
        format!("Phi = {} ({} subduction steps, remainder 0, reconstruction exact)", phi.expr.to_text(), phi.subduction_steps),
    );
    let q = inv.ctx().q();
    let gens = inv.sl2_genset();
    let expected_terms: Vec<(Vec<u32>, GfElem)> = std::iter::once((vec![q, 0, 2, 0], GfElem::ONE))
        .chain(phi.expr.terms().map(|(e, c)| (vec![e[0], e[1] + 1, e[2], 0], *c)))
        .collect();
    let (ok, detail) = match membership(&inv.b.pow(2), &gens)? {
        Membership::Member(expr) => {
            let same = expr.num_terms() == expected_terms.len() && expected_terms.iter().all(|(e, c)| expr.coeff(e) == *c);
            (same, format!("B^2 = {}", expr.to_text()))
        }
        Membership::NotMember(r) => (false, format!("not a member, {}", residual_detail(&r))),
    };
    rec.push("phi/membership", anchors::PHI_MEMBERSHIP, ok, detail);
    Ok(())
}

fn parity_checks(rec: &mut Recorder, inv: &InvariantSet, phi: &Result<Phi>) -> Result<()> {
    let ctx = inv.ctx();
    let odd = half_order(ctx) % 2 == 1;
    match phi {
        Ok(phi) => {
            let uses = phi.uses_gamma();
            let detail = format!(
                "(q-1)/2 = {} is {}; Gamma {} in Phi",
                half_order(ctx),
                if odd { "odd" } else { "even, no constraint" },
                if uses { "appears" } else { "absent" }
            );
            rec.push("parity/Phi-Gamma-free", anchors::PHI_PARITY, !odd || !uses, detail);
        }
        Err(e) => rec.push("parity/Phi-Gamma-free", anchors::PHI_PARITY, false, e.to_string()),
    }

    let samples = [
        ("B", inv.b.clone(), Poly::zero(ctx), Poly::one(ctx)),
        ("Delta + B", &inv.p.delta + &inv.b, inv.p.delta.clone(), Poly::one(ctx)),
        ("Delta*B", &inv.p.delta * &inv.b, Poly::zero(ctx), inv.p.delta.clone()),
    ];
    let mut failures = Vec::new();
    for (label, f, even, quotient) in samples {
        match parity_decompose_invariant(&f, inv) {
            Ok(d) if d.even == even && d.odd_quotient == quotient => {}
            Ok(_) => failures.push(format!("{label}: unexpected parts")),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    rec.push(
        "parity/decomposition",
        anchors::PARITY_SPLIT,
        failures.is_empty(),
        if failures.is_empty() { "B, Delta + B, Delta*B split as expected".to_string() } else { failures.join("; ") },
    );
    Ok(())
}

/// The named invariants written by `export`, in a fixed order.
pub fn export_invariants(inv: &InvariantSet) -> Vec<(&'static str, &Poly)> {
    vec![
        (construct::NAME_DELTA, &inv.p.delta),
        (construct::NAME_BETA, &inv.p.beta),
        (construct::NAME_GAMMA0, &inv.p.gamma0),
        (construct::NAME_GAMMA, &inv.big_gamma),
        (construct::NAME_B, &inv.b),
        (construct::NAME_J, &inv.j),
    ]
}

/// Exposed for callers that already hold a [`GenSet`].
pub fn certify(gens: &GenSet, bound: u32) -> Result<SagbiReport> {
    certify_sagbi(gens, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_list_parsing() {
        assert_eq!(parse_checks("sagbi,p-relation").unwrap(), vec![CheckKind::PRelation, CheckKind::Sagbi]);
        assert!(parse_checks("nope").is_err());
        assert_eq!(parse_checks("phi,phi").unwrap(), vec![CheckKind::Phi]);
    }

    #[test]
    fn q3_run_passes_and_is_deterministic() {
        let mut cfg = RunConfig::new(3, 1);
        cfg.timing = false;
        let a = run_verify(&cfg).unwrap();
        assert!(a.pass(), "{}", a.to_text());
        let b = run_verify(&cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn p_relation_only_run() {
        let mut cfg = RunConfig::new(5, 2);
        cfg.checks = vec![CheckKind::PRelation];
        let r = run_verify(&cfg).unwrap();
        assert!(r.pass());
        assert_eq!(r.config.q, 25);
    }

    #[test]
    fn config_errors() {
        assert!(matches!(run_verify(&RunConfig::new(2, 1)), Err(Error::CharacteristicTwo)));
        let mut cfg = RunConfig::new(7, 1);
        cfg.max_degree = Some(500);
        assert!(matches!(run_verify(&cfg), Err(Error::BudgetExceeded { .. })));
    }
}
