//! Property tests for Mukai-vector actions, the graded ring, normalization
//! and the mirror period map.

mod common;

use common::*;
use k3mirror::arith::{int, rat, Rat};
use k3mirror::mukai::{Action, MukaiVector, NsContext};
use proptest::prelude::*;

fn ctx_strategy() -> impl Strategy<Value = NsContext> {
    prop_oneof![
        (1i64..=20).prop_map(|n| NsContext::rank_one(n).unwrap()),
        (1i64..=10, -3i64..=3).prop_map(|(a, b)| ctx_rank_two(a, b)),
    ]
}

fn vector_for(ctx: &NsContext) -> impl Strategy<Value = MukaiVector> + Clone {
    let rank = ctx.ns().rank();
    (-40i64..=40, prop::collection::vec(-15i64..=15, rank), -40i64..=40)
        .prop_map(|(r, d, s)| MukaiVector::from_i64(r, &d, s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn every_action_preserves_the_pairing(
        (ctx, x, y, seed) in ctx_strategy().prop_flat_map(|c| {
            let v = vector_for(&c);
            (Just(c), v.clone(), v, any::<u64>())
        })
    ) {
        let a = random_action(&mut rng(seed), &ctx);
        prop_assert_eq!(check_pairing(&ctx, &a, &x, &y), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn tensor_after_curve_twist_is_reflection(
        a in 1i64..=10,
        b in -3i64..=3,
        pick in any::<prop::sample::Index>(),
        r in -40i64..=40,
        d in prop::collection::vec(-15i64..=15, 2),
        s in -40i64..=40,
    ) {
        let ctx = ctx_rank_two(a, b);
        let curves = minus_two_classes(&ctx, 3);
        let c = pick.get(&curves);
        let x = MukaiVector::from_i64(r, &d, s);
        prop_assert_eq!(check_curve_reflection(&ctx, c, &x), Ok(()));
    }

    #[test]
    fn switch_iota_shift_and_twists_are_involutions(
        (ctx, x) in ctx_strategy().prop_flat_map(|c| { let v = vector_for(&c); (Just(c), v) }),
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let b = random_ns_vec(&mut r, &ctx, 3);
        prop_assert_eq!(check_involutions(&ctx, &x, &spherical_line(&ctx, &b)), Ok(()));
    }

    #[test]
    fn graded_product_is_commutative_and_associative(
        (ctx, x, y, z) in ctx_strategy().prop_flat_map(|c| {
            let v = vector_for(&c);
            (Just(c), v.clone(), v.clone(), v)
        })
    ) {
        prop_assert_eq!(check_ring(&ctx, &x, &y, &z), Ok(()));
    }

    #[test]
    fn mirror_period_is_isotropic(
        n in 1i64..=20,
        x in prop::collection::vec((-50i64..=50, 1i64..=12), 19),
    ) {
        let x: Vec<Rat> = x.into_iter().map(|(p, q)| rat(p, q)).collect();
        prop_assert_eq!(check_mirror_isotropy(n, &x), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalization_postconditions(n in 1i64..=20, seed in any::<u64>()) {
        let (ctx, v, u) = random_normalize_input(&mut rng(seed), n);
        prop_assert_eq!(check_normalize(&ctx, &v, &u), Ok(()));
    }
}

#[test]
fn spherical_twist_moves_the_structure_sheaf_to_its_shift() {
    // T_{O}(O) = O[-1] on cohomology: (1,0,1) ↦ -(1,0,1)
    let ctx = NsContext::rank_one(6).unwrap();
    let o = MukaiVector::from_i64(1, &[0], 1);
    let got = ctx.apply_action(&Action::Twist { w: o.clone() }, &o).unwrap();
    assert_eq!(got, o.neg());
}

#[test]
fn tensor_words_compose_additively() {
    let ctx = NsContext::rank_one(5).unwrap();
    let x = MukaiVector::from_i64(3, &[2], -7);
    let two_steps = ctx
        .apply_word(&[Action::Tensor { b: vec![int(2)] }, Action::Tensor { b: vec![int(-5)] }], &x)
        .unwrap();
    let one_step = ctx.apply_action(&Action::Tensor { b: vec![int(-3)] }, &x).unwrap();
    assert_eq!(two_steps, one_step);
}
