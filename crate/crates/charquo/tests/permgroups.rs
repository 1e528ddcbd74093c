use charquo::permgrp::{
    self, classify_giant, giant_certificate, minimal_block, schreier_sims, GiantClass, GiantConfig,
    GiantMethod, GiantOutcome, Permutation,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cyc(n: usize, cycles: &[&[u32]]) -> Permutation {
    Permutation::from_cycles(n, cycles).unwrap()
}

fn long_cycle(n: usize) -> Permutation {
    let c: Vec<u32> = (0..n as u32).collect();
    cyc(n, &[&c])
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |a, k| a * BigUint::from(k))
}

/// PSL(2, q) on the projective line, points `0..q` plus infinity at `q`.
fn psl2_on_line(q: u32) -> Vec<Permutation> {
    let inf = q;
    let act = |a: u32, b: u32, c: u32, d: u32| {
        let inv = |x: u32| (1..q).find(|y| x * y % q == 1).unwrap();
        let images = (0..=q)
            .map(|x| {
                if x == inf {
                    if c == 0 { inf } else { a * inv(c) % q }
                } else {
                    let num = (a * x + b) % q;
                    let den = (c * x + d) % q;
                    if den == 0 { inf } else { num * inv(den) % q }
                }
            })
            .collect();
        Permutation::from_images(images).unwrap()
    };
    vec![act(1, 1, 0, 1), act(0, q - 1, 1, 0)]
}

/// GL(3, 2) on the nonzero vectors of F_2^3, vector `v` stored at point `v - 1`.
fn gl3_2() -> Vec<Permutation> {
    let act = |cols: [u32; 3]| {
        let images = (1u32..8)
            .map(|v| (0..3).filter(|&i| v >> i & 1 == 1).fold(0, |acc, i| acc ^ cols[i]) - 1)
            .collect();
        Permutation::from_images(images).unwrap()
    };
    vec![act([2, 4, 3]), act([1, 3, 4])]
}

fn wreath_s2_sm(m: usize) -> Vec<Permutation> {
    let n = 2 * m;
    let shift = Permutation::from_images((0..n as u32).map(|x| (x + 2) % n as u32).collect()).unwrap();
    let swap_blocks = cyc(n, &[&[0, 2], &[1, 3]]);
    vec![cyc(n, &[&[0, 1]]), shift, swap_blocks]
}

struct Case {
    name: &'static str,
    n: usize,
    gens: Vec<Permutation>,
    order: Option<u64>,
}

fn corpus() -> Vec<Case> {
    let mut v = Vec::new();
    for n in 5..=12usize {
        v.push(Case { name: "symmetric", n, gens: vec![long_cycle(n), cyc(n, &[&[0, 1]])], order: None });
        v.push(Case { name: "cyclic", n, gens: vec![long_cycle(n)], order: Some(n as u64) });
        let refl = Permutation::from_images((0..n as u32).map(|x| (n as u32 - x) % n as u32).collect()).unwrap();
        v.push(Case { name: "dihedral", n, gens: vec![long_cycle(n), refl], order: Some(2 * n as u64) });
        let threes: Vec<Permutation> = (0..n as u32 - 2).map(|i| cyc(n, &[&[i, i + 1, i + 2]])).collect();
        v.push(Case { name: "alternating", n, gens: threes, order: None });
    }
    v.push(Case { name: "psl2_5", n: 6, gens: psl2_on_line(5), order: Some(60) });
    v.push(Case { name: "psl2_7", n: 8, gens: psl2_on_line(7), order: Some(168) });
    v.push(Case { name: "psl2_11", n: 12, gens: psl2_on_line(11), order: Some(660) });
    v.push(Case {
        name: "gl3_2",
        n: 7,
        gens: gl3_2(),
        order: Some(168),
    });
    v.push(Case {
        name: "agl1_11",
        n: 11,
        gens: vec![long_cycle(11), Permutation::from_images((0..11).map(|x| 2 * x % 11).collect()).unwrap()],
        order: Some(110),
    });
    v.push(Case {
        name: "m11",
        n: 11,
        gens: vec![long_cycle(11), cyc(11, &[&[2, 6, 10, 7], &[3, 9, 4, 5]])],
        order: Some(7920),
    });
    let mut m12 = vec![long_cycle(11), cyc(11, &[&[2, 6, 10, 7], &[3, 9, 4, 5]])];
    m12.iter_mut().for_each(|g| g.0.push(11));
    m12.push(cyc(12, &[&[0, 11], &[1, 10], &[2, 5], &[3, 7], &[4, 8], &[6, 9]]));
    v.push(Case { name: "m12", n: 12, gens: m12, order: Some(95040) });
    v.push(Case { name: "s2_wr_s6", n: 12, gens: wreath_s2_sm(6), order: Some(64 * 720) });
    v.push(Case {
        name: "s5_x_s5",
        n: 10,
        gens: vec![
            cyc(10, &[&[0, 1, 2, 3, 4]]),
            cyc(10, &[&[0, 1]]),
            cyc(10, &[&[5, 6, 7, 8, 9]]),
            cyc(10, &[&[5, 6]]),
        ],
        order: Some(14400),
    });
    v
}

#[test]
fn corpus_orders_and_classification() {
    let corpus = corpus();
    assert!(corpus.len() >= 20);
    for case in &corpus {
        let n = case.n;
        let bsgs = schreier_sims(&case.gens, n).unwrap();
        let order = bsgs.order();
        let full = factorial(n);
        let expected = match (case.name, case.order) {
            (_, Some(o)) => BigUint::from(o),
            ("symmetric", None) => full.clone(),
            _ => &full / BigUint::from(2u32),
        };
        assert_eq!(order, expected, "{} on {n}", case.name);
        assert_eq!(&full % &order, BigUint::from(0u32));
        if permgrp::is_transitive(&case.gens, n) {
            assert_eq!(&order % BigUint::from(n), BigUint::from(0u32), "{}", case.name);
        }
        for g in &case.gens {
            assert!(bsgs.contains(g));
        }
        let c = classify_giant(&case.gens, n, &GiantConfig { seed: 3, budget: 500, oracle_bound: 12 });
        let truth = if order == full {
            GiantClass::Symmetric
        } else if order * BigUint::from(2u32) == full {
            GiantClass::Alternating
        } else {
            GiantClass::Inconclusive
        };
        assert_eq!(c.class, truth, "{} on {n}: {}", case.name, c.note);
        if let Some(cert) = &c.certificate {
            assert!(cert.revalidate(&case.gens));
        }
    }
}

#[test]
fn membership_tracks_parity() {
    let a8: Vec<Permutation> = (0..6).map(|i| cyc(8, &[&[i, i + 1, i + 2]])).collect();
    let bsgs = schreier_sims(&a8, 8).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let mut v: Vec<u32> = (0..8).collect();
        v.shuffle(&mut r);
        let p = Permutation::from_images(v).unwrap();
        assert_eq!(bsgs.contains(&p), permgrp::sign(&p) == 1);
    }
}

#[test]
fn certificate_for_s100_and_a101() {
    let s100 = [long_cycle(100), cyc(100, &[&[0, 1]])];
    let c = classify_giant(&s100, 100, &GiantConfig::default());
    assert_eq!(c.class, GiantClass::Symmetric);
    assert_eq!(c.method, GiantMethod::Certificate);
    let cert = c.certificate.unwrap();
    assert!(cert.q > 50 && cert.q < 98);
    assert!(cert.revalidate(&s100));
    assert!(!cert.word_string(&["a", "b"]).is_empty());

    let a101 = [long_cycle(101), cyc(101, &[&[0, 1, 2]])];
    let c = classify_giant(&a101, 101, &GiantConfig::default());
    assert_eq!(c.class, GiantClass::Alternating);
}

#[test]
fn certificates_are_deterministic() {
    let g = [long_cycle(60), cyc(60, &[&[0, 1]])];
    let a = giant_certificate(&g, 60, 42, 500);
    let b = giant_certificate(&g, 60, 42, 500);
    assert_eq!(a, b);
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    assert_eq!(single.install(|| giant_certificate(&g, 60, 42, 500)), a);
}

#[test]
fn tampered_certificates_fail() {
    let g = [long_cycle(40), cyc(40, &[&[0, 1]])];
    let GiantOutcome::Certificate(cert) = giant_certificate(&g, 40, 9, 500) else {
        panic!("no certificate");
    };
    assert!(cert.revalidate(&g));
    let mut bad = cert.clone();
    bad.q = 19;
    assert!(!bad.revalidate(&g));
    let mut bad = cert.clone();
    bad.q += 1;
    assert!(!bad.revalidate(&g));
    let other = [long_cycle(40), Permutation::identity(40)];
    assert!(!cert.revalidate(&other));
}

#[test]
fn imprimitive_wreath_is_inconclusive() {
    let g = wreath_s2_sm(50);
    assert!(permgrp::is_transitive(&g, 100));
    let c = classify_giant(&g, 100, &GiantConfig::default());
    assert_eq!(c.class, GiantClass::Inconclusive);
    assert_eq!(c.method, GiantMethod::None);
    let blocks = minimal_block(&g, 0, 1, 100).unwrap();
    assert_eq!(blocks.len(), 50);
    assert!(blocks.iter().all(|b| b.len() == 2));
}

#[test]
fn intransitive_is_refused() {
    let g = [cyc(10, &[&[0, 1, 2, 3, 4]]), cyc(10, &[&[5, 6, 7, 8, 9]])];
    assert!(matches!(giant_certificate(&g, 10, 0, 10), GiantOutcome::Inconclusive(_)));
    assert_eq!(classify_giant(&g, 10, &GiantConfig::default()).class, GiantClass::Inconclusive);
}

#[test]
fn stabilizer_chain_bound() {
    let g = [long_cycle(20)];
    assert!(permgrp::schreier_sims_bounded(&g, 20, 10).is_err());
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sign_is_a_homomorphism((a, b) in (1usize..40).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n)))) {
        prop_assert_eq!(permgrp::sign(&a.then(&b)), permgrp::sign(&a) * permgrp::sign(&b));
        prop_assert_eq!(permgrp::sign(&a.inverse()), permgrp::sign(&a));
    }

    #[test]
    fn composition_and_inverse(a in perm_strategy(25), b in perm_strategy(25)) {
        prop_assert!(a.then(&a.inverse()).is_identity());
        let ab = a.then(&b);
        for x in 0..25 {
            prop_assert_eq!(ab.image(x), b.image(a.image(x)));
        }
        prop_assert!(a.pow(u64::try_from(a.order()).unwrap()).is_identity());
    }

    #[test]
    fn text_round_trips(a in perm_strategy(30)) {
        prop_assert_eq!(a.to_string().parse::<Permutation>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(json.parse::<Permutation>().unwrap(), a);
    }

    #[test]
    fn parser_never_panics(s in "\\PC{0,40}") {
        let _ = s.parse::<Permutation>();
    }
}
