//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::io::Write;
use std::time::{Duration, Instant};

use charquo::braidquandle::{self, apply_letter, apply_word, triangle, Psl2, Sl2};
use charquo::charvar;
use charquo::orbit::{self, Budget};
use charquo::permgrp::{classify_giant, schreier_sims, GiantClass, GiantConfig, GiantMethod, Permutation};
use charquo::witness::{self, Foliation, PipelineOptions, COUNT_BOUND};
use charquo::{BraidWord, Group, Letter, Mat2, PrimeField, ProjMat2, Quad};
use charquo_qrep::form::{form_on_v, intertwiner_report, starred_identities};
use charquo_qrep::highest::{binomial, decomposition_check, highest_weight_basis, two_strand_eigenvalue};
use charquo_qrep::module::{sigma_on_v, yang_baxter_check};
use charquo_qrep::qnum::qbinom_identity_check;
use charquo_qrep::special::specialize;
use charquo_qrep::{LMatrix, LaurentPoly2};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, format!("took {:.1?}, limit {limit:?}", t.elapsed()))
}

fn random_sl2(f: &PrimeField, rng: &mut impl Rng) -> Mat2 {
    let p = f.modulus() as u32;
    let (a, b, c) = (rng.gen_range(1..p), rng.gen_range(0..p), rng.gen_range(0..p));
    let d = f.mul(f.add(1, f.mul(b, c)), f.inv(a).unwrap());
    Mat2([a, b, c, d])
}

fn random_psl2(f: &PrimeField, rng: &mut impl Rng) -> ProjMat2 {
    f.proj(random_sl2(f, rng))
}

fn random_quad(f: &PrimeField, rng: &mut impl Rng) -> Quad<ProjMat2> {
    Quad::new(random_psl2(f, rng), random_psl2(f, rng), random_psl2(f, rng), random_psl2(f, rng))
}

fn w(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn identity_suite() -> Outcome {
    let t = Instant::now();
    let f = PrimeField::new(1009).unwrap();
    let g = Psl2(f);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inner = w("s2 s3 s1").pow(2);
    let samples = 1000;
    for k in 0..samples {
        let q = random_quad(&f, &mut rng);
        let (a, b, c) = (random_psl2(&f, &mut rng), random_psl2(&f, &mut rng), random_psl2(&f, &mut rng));
        ensure(triangle(&g, &a, &a) == a, format!("idempotence, sample {k}"))?;
        ensure(
            triangle(&g, &a, &triangle(&g, &b, &c)) == triangle(&g, &triangle(&g, &a, &b), &triangle(&g, &a, &c)),
            format!("self-distributivity, sample {k}"),
        )?;
        let same = |x: &str, y: &str| apply_word(&g, &w(x), &q) == apply_word(&g, &w(y), &q);
        ensure(
            same("s1 s2 s1", "s2 s1 s2") && same("s2 s3 s2", "s3 s2 s3") && same("s1 s3", "s3 s1"),
            format!("braid relations, sample {k}"),
        )?;
        let word = BraidWord((0..8).map(|_| Letter::ALL[rng.gen_range(0..6)]).collect());
        let img = apply_word(&g, &word, &q);
        ensure(
            braidquandle::gamma(&g, &img) == braidquandle::gamma(&g, &q)
                && braidquandle::delta(&g, &img) == braidquandle::delta(&g, &q),
            format!("gamma/delta invariance, sample {k}"),
        )?;
        ensure(braidquandle::center_image(&g, &q).is_ok(), format!("center formula, sample {k}"))?;
        let e = braidquandle::epsilon(&q);
        for i in 1..=3u8 {
            ensure(
                braidquandle::epsilon(&apply_letter(&g, Letter::sigma(i), &e)) == apply_letter(&g, Letter::sigma_inv(4 - i), &q),
                format!("epsilon relation, sample {k}"),
            )?;
            let lhs = inner.then(&BraidWord(vec![Letter::sigma(i)]));
            let rhs = BraidWord(vec![Letter::sigma(4 - i)]).then(&inner);
            ensure(apply_word(&g, &lhs, &q) == apply_word(&g, &rhs, &q), format!("inner identity, sample {k}"))?;
        }
        ensure(
            braidquandle::epsilon(&e) == q && braidquandle::gamma(&g, &e) == g.inv(&braidquandle::gamma(&g, &q)),
            format!("epsilon involution, sample {k}"),
        )?;
        let x = random_psl2(&f, &mut rng);
        for l in Letter::ALL {
            let img = apply_letter(&g, l, &q);
            ensure(
                apply_letter(&g, l, &braidquandle::left_mul(&g, &x, &q)) == braidquandle::left_mul(&g, &x, &img)
                    && apply_letter(&g, l, &braidquandle::right_mul(&g, &q, &x)) == braidquandle::right_mul(&g, &img, &x),
                format!("two-sided equivariance, sample {k}"),
            )?;
        }
    }
    within(t, Duration::from_secs(10))?;
    Ok(format!("{samples} quadruples over PSL2(F_1009) in {:.2?}", t.elapsed()))
}

fn trace_consistency() -> Outcome {
    let f = PrimeField::new(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples = 1000;
    for k in 0..samples {
        let q = Quad::new(random_sl2(&f, &mut rng), random_sl2(&f, &mut rng), random_sl2(&f, &mut rng), random_sl2(&f, &mut rng));
        let t = charvar::from_quad(&f, &q);
        ensure(charvar::fricke_check(&f, &t), format!("Fricke relation, sample {k}"))?;
        for l in Letter::ALL {
            let ti = charvar::from_quad(&f, &apply_letter(&Sl2(f), l, &q));
            ensure(charvar::fricke_check(&f, &ti), format!("Fricke relation after {l:?}, sample {k}"))?;
            ensure(
                charvar::canonicalize(&f, &charvar::sigma_action(&f, l.gen, l.inverse, &t)) == charvar::canonicalize(&f, &ti),
                format!("polynomial action differs from matrices for {l:?}, sample {k}"),
            )?;
        }
    }
    Ok(format!("{samples} points at p = 101, all six letters"))
}

fn dual_keys() -> Outcome {
    let mut parts = Vec::new();
    for p in [19u64, 31] {
        let cfg = witness::build(p).map_err(|e| e.to_string())?;
        let r = orbit::dual_key_check(&cfg.point, &cfg.params, Budget::default()).map_err(|e| e.to_string())?;
        ensure(r.agree(), format!("p = {p}: {r:?}"))?;
        parts.push(format!("p = {p}: {} classes", r.fast_size));
    }
    Ok(parts.join(", "))
}

fn counting_oracle() -> Outcome {
    let t = Instant::now();
    let cfg = witness::build(19).map_err(|e| e.to_string())?;
    let count = witness::count_x(&cfg.params, COUNT_BOUND).map_err(|e| e.to_string())?;
    let exact = witness::enumerate_x_exact(&cfg.params, COUNT_BOUND).map_err(|e| e.to_string())?;
    ensure(count == exact.len(), format!("count {count}, exact enumeration {}", exact.len()))?;
    within(t, Duration::from_secs(60))?;
    Ok(format!("|X| = {count} at p = 19 by both routes in {:.2?}", t.elapsed()))
}

fn pipeline_report() -> Result<witness::QuotientReport, String> {
    let opts = PipelineOptions { seed: 7, primitivity_samples: 100, ..Default::default() };
    witness::run_pipeline(19, &opts).map(|a| a.report).map_err(|e| e.to_string())
}

fn pipeline(r: &witness::QuotientReport, elapsed: Duration) -> Outcome {
    ensure(r.lemmas.cycle_orders.iter().all(|&b| b), "cycle types differ from matrix orders")?;
    let t = &r.lemmas.sigma1_types;
    ensure(t.unipotent > 0 && t.split > 0 && t.nonsplit > 0, format!("missing sigma1 type: {t:?}"))?;
    ensure(r.method == GiantMethod::Certificate, format!("no certificate: {}", r.classification_note))?;
    ensure(r.certificate.as_ref().is_some_and(|c| c.revalidated), "certificate did not revalidate")?;
    ensure(
        matches!(r.classification, GiantClass::Alternating | GiantClass::Symmetric),
        format!("classification {:?}", r.classification),
    )?;
    ensure(!r.x_is_identity && r.generator_signs.x == 1, "x is trivial or odd")?;
    ensure(r.f2_alternating, r.f2_verdict.clone())?;
    ensure(elapsed < Duration::from_secs(300), format!("took {elapsed:.1?}"))?;
    Ok(format!(
        "n = {}, {:?} via q = {}, x even and nontrivial, {:.2?}",
        r.n,
        r.classification,
        r.certificate.as_ref().map_or(0, |c| c.q),
        elapsed
    ))
}

fn unique_decomposition() -> Outcome {
    let t = Instant::now();
    let cfg = witness::build(31).map_err(|e| e.to_string())?;
    let f = cfg.field;
    let classes = witness::unipotent_decompositions(&cfg.params);
    ensure(classes.len() == 1, format!("{} classes", classes.len()))?;
    let own = witness::first_decomposition_sl2(&f, &cfg.point_sl2);
    ensure(witness::class_contains(&classes[0], &f, &own), "class misses the witness decomposition")?;
    ensure(
        witness::proper_decomposition(&cfg.params, &cfg.point, Foliation::First).identities_hold,
        "witness decomposition fails its identities",
    )?;
    within(t, Duration::from_secs(60))?;
    Ok(format!("one class of {} decompositions at p = 31 in {:.2?}", classes[0].len(), t.elapsed()))
}

fn primitivity(r: &witness::QuotientReport) -> Outcome {
    let s = &r.primitivity;
    ensure(s.samples == 100, format!("{} samples", s.samples))?;
    ensure(s.trivial == s.samples, format!("{} of {} block systems trivial", s.trivial, s.samples))?;
    Ok(format!("{} of {} minimal blocks trivial", s.trivial, s.samples))
}

fn mono(c: i128, eq: i32, es: i32) -> LaurentPoly2 {
    LaurentPoly2::monomial(c, eq, es)
}

fn quantum_engine() -> Outcome {
    let t = Instant::now();
    let err = |e: charquo_qrep::QrepError| e.to_string();
    for n in 2..=5usize {
        for ell in 0..=3u32 {
            let hw = highest_weight_basis(n, ell).map_err(err)?;
            ensure(
                hw.dim() as u64 == binomial(n as u64 + ell as u64 - 2, ell as u64) && hw.check_kernel(),
                format!("dimension of W({n}, {ell})"),
            )?;
            let reps = hw.braid_matrices().map_err(err)?;
            ensure(reps.check_braid_relations() && reps.check_inverses(), format!("braid relations on W({n}, {ell})"))?;
            if n >= 3 {
                let d = decomposition_check(n, ell).map_err(err)?;
                ensure(d.ok(), format!("decomposition of W({n}, {ell}): {d:?}"))?;
            }
        }
    }
    for ell in 1..=4u32 {
        let l = ell as i32;
        let want = mono(if ell % 2 == 0 { 1 } else { -1 }, l * (l - 1), -2 * l);
        ensure(two_strand_eigenvalue(ell).map_err(err)?.0 == want, format!("W(2, {ell}) eigenvalue"))?;
        ensure(yang_baxter_check(ell), format!("Yang-Baxter at level {ell}"))?;
    }
    ensure((0..=6).all(qbinom_identity_check), "q-binomial product identity")?;
    let hw = highest_weight_basis(4, 1).map_err(err)?;
    let hv = form_on_v(&hw).map_err(err)?;
    let on_v: Vec<LMatrix> = (1..4).map(|i| sigma_on_v(&hw.v, i)).collect();
    ensure(starred_identities(&on_v, &hv), "starred identities on V(4, 1)")?;
    for (n, ell) in [(4, 1), (4, 2)] {
        let r = intertwiner_report(n, ell).map_err(err)?;
        ensure(
            r.solutions == 1 && r.inverses_intertwined && r.symmetry.is_some() && r.ok(),
            format!("intertwiner for ({n}, {ell}): {} solutions", r.solutions),
        )?;
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("all symbolic checks in {:.2?}", t.elapsed()))
}

fn specialization() -> Outcome {
    let sp = specialize(4, 2, 1009, 2, 3).map_err(|e| e.to_string())?;
    ensure(sp.relations_hold && sp.inverses_hold, "braid relations fail mod 1009")?;
    ensure(sp.first_last_distinct, "sigma1 and sigma3 agree projectively")?;
    ensure(!sp.first_last_ratio_scalar, "sigma1 sigma3^-1 is scalar")?;
    ensure(sp.intertwiner_holds, "J fails after reduction")?;
    Ok("W(4, 2) at r = 1009, (q0, s0) = (2, 3); surjectivity not checked".into())
}

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

fn perm_group_oracle() -> Outcome {
    // (name, degree, generators, known order)
    let mut corpus: Vec<(String, usize, Vec<Permutation>, BigUint)> = Vec::new();
    for n in 4..=10usize {
        corpus.push((format!("S{n}"), n, vec![long_cycle(n), cyc(n, &[&[0, 1]])], factorial(n)));
        let threes = (0..n as u32 - 2).map(|i| cyc(n, &[&[i, i + 1, i + 2]])).collect();
        corpus.push((format!("A{n}"), n, threes, factorial(n) / BigUint::from(2u32)));
    }
    for n in [5usize, 8, 12] {
        corpus.push((format!("C{n}"), n, vec![long_cycle(n)], BigUint::from(n)));
        let refl = Permutation::from_images((0..n as u32).map(|x| (n as u32 - x) % n as u32).collect()).unwrap();
        corpus.push((format!("D{n}"), n, vec![long_cycle(n), refl], BigUint::from(2 * n)));
    }
    corpus.push(("V4".into(), 4, vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])], BigUint::from(4u32)));
    corpus.push(("S2 wr S3".into(), 6, vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 2, 4], &[1, 3, 5]]), cyc(6, &[&[0, 2], &[1, 3]])], BigUint::from(48u32)));
    corpus.push(("S3 wr S2".into(), 6, vec![cyc(6, &[&[0, 1, 2]]), cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 3], &[1, 4], &[2, 5]])], BigUint::from(72u32)));
    corpus.push(("S4 wr S3".into(), 12, vec![cyc(12, &[&[0, 1, 2, 3]]), cyc(12, &[&[0, 1]]), cyc(12, &[&[0, 4, 8], &[1, 5, 9], &[2, 6, 10], &[3, 7, 11]]), cyc(12, &[&[0, 4], &[1, 5], &[2, 6], &[3, 7]])], BigUint::from(24u32 * 24 * 24 * 6)));
    corpus.push(("M11".into(), 11, vec![long_cycle(11), cyc(11, &[&[2, 6, 10, 7], &[3, 9, 4, 5]])], BigUint::from(7920u32)));

    let mut giants = 0;
    for (name, n, gens, known) in &corpus {
        let order = schreier_sims(gens, *n).map_err(|e| format!("{name}: {e}"))?.order();
        ensure(&order == known, format!("{name}: stabilizer chain order {order}, expected {known}"))?;
        let full = factorial(*n);
        let truth = if order == full {
            GiantClass::Symmetric
        } else if &order * BigUint::from(2u32) == full {
            GiantClass::Alternating
        } else {
            GiantClass::Inconclusive
        };
        let c = classify_giant(gens, *n, &GiantConfig { seed: 5, budget: 500, oracle_bound: 12 });
        ensure(c.class == truth, format!("{name}: classified {:?}, order says {truth:?} ({})", c.class, c.note))?;
        if truth != GiantClass::Inconclusive {
            giants += 1;
        }
    }
    Ok(format!("{} groups ({giants} giants), 100% agreement", corpus.len()))
}

fn main() {
    let mut failures = 0;
    let mut report = |k: usize, name: &str, outcome: Outcome| {
        let line = match outcome {
            Ok(detail) => format!("criterion {k:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failures += 1;
                format!("criterion {k:>2} FAIL  {name}: {why}")
            }
        };
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
    };

    report(1, "algebraic identities", identity_suite());
    report(2, "trace coordinate consistency", trace_consistency());
    report(3, "dual-key agreement", dual_keys());
    report(4, "counting oracle", counting_oracle());
    let t = Instant::now();
    let pipeline_run = pipeline_report();
    let elapsed = t.elapsed();
    report(5, "witness pipeline at p = 19", pipeline_run.as_ref().map_err(Clone::clone).and_then(|r| pipeline(r, elapsed)));
    report(6, "unique unipotent decomposition", unique_decomposition());
    report(7, "primitivity spot check", pipeline_run.as_ref().map_err(Clone::clone).and_then(primitivity));
    report(8, "quantum engine", quantum_engine());
    report(9, "specialization", specialization());
    report(10, "permutation-group oracle", perm_group_oracle());

    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria pass");
}
