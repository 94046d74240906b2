use std::sync::Arc;

use invforge::action::GroupElem;
use invforge::construct::PInvariants;
use invforge::sagbi::{membership, subduct, Membership};
use invforge::{FieldCtx, GfElem, Monomial, Poly, Var};
use proptest::prelude::*;
use proptest::test_runner::{FileFailurePersistence, RngAlgorithm, RngSeed};

thread_local! {
    static F9: Arc<FieldCtx> = Arc::new(FieldCtx::new(3, 2).unwrap());
    static F7: Arc<FieldCtx> = Arc::new(FieldCtx::new(7, 1).unwrap());
}

fn f9() -> Arc<FieldCtx> {
    F9.with(Arc::clone)
}

fn f7() -> Arc<FieldCtx> {
    F7.with(Arc::clone)
}

/// Cases come from a fixed seed so every run sees the same polynomials.
const SEED: u64 = 0x5eed_1f0_2b3;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..ProptestConfig::default()
    }
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (0u32..4, 0u32..4, 0u32..4).prop_map(|(a, b, c)| Monomial::new(a, b, c))
}

fn poly_in(ctx: Arc<FieldCtx>, max_terms: usize) -> impl Strategy<Value = Poly> {
    let q = ctx.q();
    prop::collection::vec((monomial(), 0..q), 0..max_terms).prop_map(move |terms| {
        Poly::from_terms(&ctx, terms.into_iter().map(|(m, c)| (m, ctx.from_code(c).unwrap())))
    })
}

fn poly9() -> impl Strategy<Value = Poly> {
    poly_in(f9(), 6)
}

fn nonzero9() -> impl Strategy<Value = Poly> {
    poly9().prop_filter("nonzero", |f| !f.is_zero())
}

fn unit9() -> impl Strategy<Value = GfElem> {
    (1u32..9).prop_map(|c| f9().from_code(c).unwrap())
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ring_axioms(f in poly9(), g in poly9(), h in poly9()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Poly::one(&f9()), f.clone());
    }

    #[test]
    fn lead_monomial_is_multiplicative(f in nonzero9(), g in nonzero9()) {
        let fg = &f * &g;
        prop_assert_eq!(fg.lead_monomial().unwrap(), f.lead_monomial().unwrap().mul(&g.lead_monomial().unwrap()));
    }

    #[test]
    fn grevlex_respects_multiplication(a in monomial(), b in monomial(), c in monomial()) {
        prop_assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
    }

    #[test]
    fn exact_division_inverts_multiplication(f in poly9(), g in nonzero9()) {
        prop_assert_eq!((&f * &g).exact_divide(&g).unwrap(), f);
    }

    #[test]
    fn identity_substitution(f in poly9()) {
        let ctx = f9();
        let (a0, a1, a2) = (Poly::var(&ctx, Var::A0), Poly::var(&ctx, Var::A1), Poly::var(&ctx, Var::A2));
        prop_assert_eq!(f.substitute_all([&a0, &a1, &a2]).unwrap(), f.clone());
        prop_assert_eq!(GroupElem::identity(&ctx).apply(&f).unwrap(), f);
    }

    #[test]
    fn text_and_json_round_trip(f in poly9()) {
        let ctx = f9();
        prop_assert_eq!(Poly::parse(&ctx, &f.to_text()).unwrap(), f.clone());
        prop_assert_eq!(Poly::from_json(&ctx, &f.to_json()).unwrap(), f);
    }

    #[test]
    fn weight_is_multiplicative(m in monomial(), n in monomial()) {
        let ctx = f9();
        let w = m.weight(&ctx).value() + n.weight(&ctx).value();
        prop_assert_eq!(m.mul(&n).weight(&ctx).value(), w % 8);
    }

    #[test]
    fn action_is_a_right_action(c1 in 0u32..9, c2 in 0u32..9, w in unit9(), f in poly9()) {
        let ctx = f9();
        let g = GroupElem::sigma(&ctx, ctx.from_code(c1).unwrap()).compose(&GroupElem::tau(&ctx));
        let h = GroupElem::rho(&ctx, w).unwrap().compose(&GroupElem::sigma(&ctx, ctx.from_code(c2).unwrap()));
        prop_assert_eq!(g.compose(&h).apply(&f).unwrap(), h.apply(&g.apply(&f).unwrap()).unwrap());
    }

    #[test]
    fn field_axioms(a in 0u32..9, b in 0u32..9, c in 1u32..9) {
        let ctx = f9();
        let (a, b, c) = (ctx.from_code(a).unwrap(), ctx.from_code(b).unwrap(), ctx.from_code(c).unwrap());
        prop_assert_eq!(ctx.mul(ctx.add(a, b), c), ctx.add(ctx.mul(a, c), ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(c, ctx.inv(c).unwrap()), GfElem::ONE);
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
    }
}

proptest! {
    #![proptest_config(config(32))]

    /// Random polynomials in the P generators subduct to zero and the
    /// returned expression evaluates back to the input.
    #[test]
    fn subduction_is_sound(coeffs in prop::collection::vec((0u32..3, 0u32..3, 0u32..2, 0u32..2, 1u32..7), 1..5)) {
        let ctx = f7();
        let inv = PInvariants::build(&ctx).unwrap();
        let gens = inv.genset();
        let mut f = Poly::zero(&ctx);
        for (e0, e1, e2, e3, c) in coeffs {
            let term = &(&inv.a0.pow(e0) * &inv.delta.pow(e1)) * &(&inv.beta.pow(e2) * &inv.gamma0.pow(e3));
            f = &f + &term.scale(ctx.from_int(c as i64));
        }
        let s = subduct(&f, &gens).unwrap();
        prop_assert!(s.remainder.is_zero());
        prop_assert_eq!(s.expr.eval(&gens).unwrap(), f.clone());
        match membership(&f, &gens).unwrap() {
            Membership::Member(e) => prop_assert_eq!(e.eval(&gens).unwrap(), f),
            Membership::NotMember(_) => prop_assert!(false, "member reported as non-member"),
        }
    }

    /// Whatever the remainder, `f = eval(expr) + remainder`.
    #[test]
    fn subduction_decomposes(f in poly_in(f7(), 5)) {
        let ctx = f7();
        let gens = PInvariants::build(&ctx).unwrap().genset();
        let s = subduct(&f, &gens).unwrap();
        prop_assert_eq!(&s.expr.eval(&gens).unwrap() + &s.remainder, f);
    }
}
