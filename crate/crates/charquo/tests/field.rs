mod common;

use charquo::ffield::FieldError;
use charquo::{ElementClass, Mat2, PrimeField, ProjMat2};
use proptest::prelude::*;

fn legendre_by_search(p: u64, a: u64) -> i8 {
    if a % p == 0 {
        return 0;
    }
    if (1..p).any(|x| x * x % p == a % p) {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn classify_matches_discriminant(seed in any::<u64>(), pi in 0usize..4) {
        let p = [19u64, 31, 101, 1009][pi];
        let f = PrimeField::new(p).unwrap();
        let m = common::random_psl2(&f, &mut common::rng(seed));
        let t = f.trace(&m.0) as u64;
        let disc = (t * t + 4 * p - 4) % p;
        let expected = if m == ProjMat2::IDENTITY {
            ElementClass::Identity
        } else if t == 0 {
            ElementClass::Involution
        } else if disc == 0 {
            ElementClass::Unipotent
        } else if legendre_by_search(p, disc) == 1 {
            ElementClass::Split
        } else {
            ElementClass::NonSplit
        };
        prop_assert_eq!(f.classify(&m), expected);
        let ord = f.order(&m);
        prop_assert!(f.is_proj_identity(&f.proj_pow(&m, ord)));
        prop_assert_eq!(f.centralizer_order(f.classify(&m)) % ord, 0);
    }

    #[test]
    fn sign_canonicalization(seed in any::<u64>()) {
        let f = PrimeField::new(1009).unwrap();
        let a = common::random_sl2(&f, &mut common::rng(seed));
        prop_assert_eq!(f.proj(a), f.proj(f.mat_neg(&a)));
        let lead = f.proj(a).0 .0.into_iter().find(|&x| x != 0).unwrap();
        prop_assert!((1..=504).contains(&lead));
    }

    #[test]
    fn conjugators_conjugate(seed in any::<u64>()) {
        let f = PrimeField::new(101).unwrap();
        let mut r = common::rng(seed);
        let m = common::random_psl2(&f, &mut r);
        let x = common::random_psl2(&f, &mut r);
        let n = f.proj_mul(&f.proj_mul(&x, &m), &f.proj_inv(&x));
        let g = f.conjugator(&m, &n);
        prop_assert!(g.is_ok());
        prop_assert_eq!(f.proj(f.conj(&g.unwrap(), &m.0)), n);
        let other = common::random_psl2(&f, &mut r);
        if let Ok(g) = f.conjugator(&m, &other) {
            prop_assert_eq!(f.proj(f.conj(&g, &m.0)), other);
        }
    }
}

#[test]
fn printed_examples() {
    let f = PrimeField::new(31).unwrap();
    let m = f.proj(f.mat(3, 1, -1, 0));
    assert_eq!(f.classify(&m), ElementClass::Split);
    assert_eq!(f.order(&m), 15);
    assert!(f.is_maximal(&m).unwrap());
    let sq = f.proj_pow(&m, 2);
    assert_eq!(f.order(&sq), 15);
    let u = f.proj(f.mat(1, 1, 0, 1));
    assert_eq!(f.classify(&u), ElementClass::Unipotent);
    assert_eq!(f.order(&u), 31);
    assert!(f.is_maximal(&u).unwrap());
    assert_eq!(f.classify(&ProjMat2::IDENTITY), ElementClass::Identity);
    assert_eq!(f.order(&ProjMat2::IDENTITY), 1);
    assert!(f.is_maximal(&ProjMat2::IDENTITY).is_err());
    assert!(f.is_maximal(&f.proj(f.mat(0, 1, -1, 0))).is_err());
}

#[test]
fn squares_of_even_order_maximal_elements_are_not_maximal() {
    let f = PrimeField::new(29).unwrap();
    let mut r = common::rng(2);
    let mut checked = 0;
    while checked < 20 {
        let m = common::random_psl2(&f, &mut r);
        let class = f.classify(&m);
        if !matches!(class, ElementClass::Split | ElementClass::NonSplit) {
            continue;
        }
        if f.is_maximal(&m).unwrap() && f.order(&m) % 2 == 0 {
            assert!(!f.is_maximal(&f.proj_pow(&m, 2)).unwrap());
            checked += 1;
        }
    }
}

#[test]
fn trace_three_is_split_when_five_is_a_square() {
    for p in [11u64, 19, 29, 31, 41, 59, 61, 71] {
        let f = PrimeField::new(p).unwrap();
        let m = f.proj(f.mat(3, 1, -1, 0));
        assert_eq!(f.classify(&m), ElementClass::Split, "p = {p}");
    }
    let f = PrimeField::new(19).unwrap();
    assert_eq!(f.centralizer_pgl(&f.proj(f.mat(3, 1, -1, 0))).unwrap().len(), 18);
    assert!(matches!(f.centralizer_pgl(&f.proj(Mat2::IDENTITY)), Err(FieldError::NoTorus(_))));
}
