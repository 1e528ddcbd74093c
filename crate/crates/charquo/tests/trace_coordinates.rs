mod common;

use charquo::braidquandle::{apply_letter, Psl2, Sl2};
use charquo::charvar::{self, TraceTuple};
use charquo::{witness, Letter, PrimeField};
use proptest::prelude::*;
use rand::Rng;

fn random_tuple(f: &PrimeField, seed: u64) -> TraceTuple {
    let mut r = common::rng(seed);
    let p = f.modulus() as u32;
    TraceTuple(std::array::from_fn(|_| r.gen_range(0..p)))
}

fn apply_tuple(f: &PrimeField, word: &[(u8, bool)], t: &TraceTuple) -> TraceTuple {
    word.iter().fold(*t, |acc, &(g, inv)| charvar::sigma_action(f, g, inv, &acc))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn polynomial_maps_invert(seed in any::<u64>()) {
        let f = PrimeField::new(101).unwrap();
        let t = random_tuple(&f, seed);
        for g in 1..=3u8 {
            prop_assert_eq!(charvar::sigma_action(&f, g, true, &charvar::sigma_action(&f, g, false, &t)), t);
            prop_assert_eq!(charvar::sigma_action(&f, g, false, &charvar::sigma_action(&f, g, true, &t)), t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn polynomial_braid_relations(seed in any::<u64>()) {
        let f = PrimeField::new(101).unwrap();
        let t = random_tuple(&f, seed);
        let s = |i: u8| (i, false);
        prop_assert_eq!(apply_tuple(&f, &[s(1), s(2), s(1)], &t), apply_tuple(&f, &[s(2), s(1), s(2)], &t));
        prop_assert_eq!(apply_tuple(&f, &[s(2), s(3), s(2)], &t), apply_tuple(&f, &[s(3), s(2), s(3)], &t));
        prop_assert_eq!(apply_tuple(&f, &[s(1), s(3)], &t), apply_tuple(&f, &[s(3), s(1)], &t));
    }

    #[test]
    fn polynomial_action_matches_matrices(seed in any::<u64>()) {
        let f = PrimeField::new(101).unwrap();
        let q = common::random_sl2_quad(&f, &mut common::rng(seed));
        let t = charvar::from_quad(&f, &q);
        prop_assert!(charvar::fricke_check(&f, &t));
        for l in Letter::ALL {
            let img = apply_letter(&Sl2(f), l, &q);
            let ti = charvar::from_quad(&f, &img);
            prop_assert!(charvar::fricke_check(&f, &ti));
            prop_assert_eq!(
                charvar::canonicalize(&f, &charvar::sigma_action(&f, l.gen, l.inverse, &t)),
                charvar::canonicalize(&f, &ti)
            );
        }
    }

    #[test]
    fn flips_fix_the_key(seed in any::<u64>(), mask in 0u8..8) {
        let f = PrimeField::new(11).unwrap();
        let t = random_tuple(&f, seed);
        prop_assert_eq!(charvar::canonicalize(&f, &charvar::flip(&f, mask, &t)), charvar::canonicalize(&f, &t));
        prop_assert_eq!(charvar::fricke_value(&f, &charvar::flip(&f, mask, &t)), charvar::fricke_value(&f, &t));
    }

    #[test]
    fn lift_signs_are_flips(seed in any::<u64>(), which in 0usize..4) {
        let f = PrimeField::new(101).unwrap();
        let q = common::random_sl2_quad(&f, &mut common::rng(seed));
        let mut arr = q.to_array();
        arr[which] = f.mat_neg(&arr[which]);
        let q2 = charquo::Quad::new(arr[0], arr[1], arr[2], arr[3]);
        prop_assert_eq!(
            charvar::canonicalize(&f, &charvar::from_quad(&f, &q)),
            charvar::canonicalize(&f, &charvar::from_quad(&f, &q2))
        );
    }
}

#[test]
fn witness_tuple_is_a_member() {
    for p in [19u64, 31, 101] {
        let cfg = witness::build(p).unwrap();
        let f = cfg.field;
        let t = charvar::from_quad(&f, &cfg.point_sl2);
        assert!(charvar::membership(&t, &cfg.params), "p = {p}");
        assert!(t.0[4] == cfg.params.t_delta || t.0[4] == f.neg(cfg.params.t_delta));
        assert!(!charvar::membership(&TraceTuple([2; 7]), &cfg.params));
    }
}

#[test]
fn membership_preserved_along_words() {
    let cfg = witness::build(31).unwrap();
    let f = cfg.field;
    let g = Psl2(f);
    let mut r = common::rng(5);
    let mut q = cfg.point;
    for _ in 0..1000 {
        let l = Letter::ALL[r.gen_range(0..6)];
        q = apply_letter(&g, l, &q);
        let t = charvar::from_proj_quad(&f, &q);
        assert!(charvar::membership(&t, &cfg.params));
        let ts = charvar::sigma_action(&f, l.gen, l.inverse, &t);
        assert!(charvar::membership(&ts, &cfg.params));
    }
}

#[test]
fn key_exact_is_a_class_invariant() {
    let cfg = witness::build(19).unwrap();
    let f = cfg.field;
    let params = &cfg.params;
    assert!(params.twist_pairs().count() <= 18 * 20);
    let g = Psl2(f);
    let mut r = common::rng(9);
    let mut q = cfg.point;
    let pairs: Vec<_> = params.twist_pairs().collect();
    for _ in 0..300 {
        q = apply_letter(&g, Letter::ALL[r.gen_range(0..6)], &q);
        let (gg, hh) = pairs[r.gen_range(0..pairs.len())];
        let moved = q.map(|m| f.twist(gg, &m.0, hh));
        assert_eq!(charvar::key_exact(&moved, params), charvar::key_exact(&q, params));
        assert_eq!(charvar::fast_key(&f, &moved), charvar::fast_key(&f, &q));
    }
}
