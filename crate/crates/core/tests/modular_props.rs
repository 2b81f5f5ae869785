//! Property tests for the level-six monodromy matrices, kernel subgroups,
//! gluing and the partner counts.

mod common;

use common::*;
use k3mirror::arith::imat;
use k3mirror::discriminant::{cyclic_disc_isometry_count, discriminant_group};
use k3mirror::lattice::IntLattice;
use k3mirror::modular::{fm_partner_count, monodromy_index, monodromy_index_report};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn word(alphabet: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..alphabet, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_500))]

    #[test]
    fn r_is_an_anti_homomorphism(w in word(6, 8)) {
        prop_assert_eq!(check_r_antihom(&w), Ok(()));
    }

    #[test]
    fn orientation_sign_is_multiplicative(a in word(4, 8), b in word(4, 8)) {
        prop_assert_eq!(check_orientation(&a, &b), Ok(()));
    }

    #[test]
    fn kernel_is_a_normal_subgroup(k in word(3, 5), g in word(4, 5)) {
        prop_assert_eq!(check_kernel_subgroup(&k, &g), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn glue_extension_matches_discriminant_test(
        n in prop::sample::select(vec![2i64, 3, 4, 6]),
        wn in word(5, 4),
        wk in word(7, 4),
    ) {
        let an = n_side_alphabet(n).len();
        let ak = k_side_alphabet(n).len();
        let wn: Vec<usize> = wn.into_iter().map(|i| i % an).collect();
        let wk: Vec<usize> = wk.into_iter().map(|i| i % ak).collect();
        prop_assert!(check_glue(n, &wn, &wk).is_ok(), "{:?}", check_glue(n, &wn, &wk));
    }

    #[test]
    fn discriminant_order_is_determinant(
        rank in 1usize..=4,
        entries in prop::collection::vec(-5i64..=5, 16),
    ) {
        let rows: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                let e = entries[a * 4 + b];
                if i == j { 2 * e } else { e }
            }).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let gram = imat(&refs);
        prop_assume!(!gram.det().is_zero());
        let l = IntLattice::new(None, gram.clone()).unwrap();
        let d = discriminant_group(&l).unwrap();
        prop_assert_eq!(d.order(), gram.det().abs());
    }
}

#[test]
fn glue_cross_check_sees_both_outcomes() {
    // the random words above must exercise extending and non-extending pairs
    let mut seen = [false; 2];
    let mut r = rng(7);
    for n in [2, 3, 4, 6] {
        let (an, ak) = (n_side_alphabet(n).len(), k_side_alphabet(n).len());
        for _ in 0..40 {
            use rand::Rng;
            let wn: Vec<usize> = (0..r.gen_range(1..=4)).map(|_| r.gen_range(0..an)).collect();
            let wk: Vec<usize> = (0..r.gen_range(1..=4)).map(|_| r.gen_range(0..ak)).collect();
            seen[usize::from(check_glue(n, &wn, &wk).unwrap())] = true;
        }
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn disc_isometry_count_is_two_to_omega() {
    for n in 1..=500u64 {
        assert_eq!(cyclic_disc_isometry_count(n), 1 << omega(n), "n = {n}");
    }
}

#[test]
fn partner_count_equals_monodromy_index() {
    for n in 2..=200i64 {
        let fm = fm_partner_count(2 * n).unwrap();
        let idx = monodromy_index(n).unwrap();
        assert_eq!(fm, idx, "n = {n}");
        assert_eq!(fm, 1 << (omega(n as u64) - 1), "n = {n}");
        let rep = monodromy_index_report(n).unwrap();
        assert!(!rep.minus_id_in_kernel, "n = {n}");
        assert!(rep.orientation_witness, "n = {n}");
    }
}
