use std::collections::HashSet;
use std::path::PathBuf;

use charquo::orbit::{self, Budget, OrbitError};
use charquo::permgrp::{self, GiantClass, GiantConfig, Permutation};
use charquo::witness::{self, KeyVerification, PipelineError, PipelineOptions, PrimeMode, WitnessError};
use charquo_qrep::export::{export, export_specialized, to_json_string};
use charquo_qrep::highest::{expected_dim, highest_weight_basis, two_strand_eigenvalue};
use charquo_qrep::special::specialize;
use charquo_qrep::verify::{verify_case, verify_global, CheckResult};
use charquo_qrep::QrepError;
use serde_json::{json, Value};

use crate::output::{atomic_write, to_value, CmdResult, Exit, Failure};

pub struct WitnessArgs {
    pub p: Option<u64>,
    pub mode: PrimeMode,
    pub min: u64,
}

pub fn witness(a: &WitnessArgs) -> CmdResult {
    let p = a.p.unwrap_or_else(|| witness::find_prime(a.min, a.mode));
    let cfg = witness::build(p).map_err(|e| Failure::new(Exit::Precondition, e.to_string()))?;
    let rep = witness::check_assumptions(&cfg);
    let q = &cfg.point_sl2;
    let v = json!({
        "p": p,
        "mode": if a.p.is_none() { Some(a.mode) } else { None },
        "admissible_strict": witness::prime_admissible(p, PrimeMode::Strict),
        "admissible_relaxed": witness::prime_admissible(p, PrimeMode::Relaxed),
        "u": cfg.u,
        "v": cfg.v,
        "w": cfg.w,
        "gamma": cfg.gamma,
        "delta": cfg.delta,
        "point": [q.a, q.b, q.c, q.d],
        "traces": { "gamma": cfg.params.t_gamma, "delta": cfg.params.t_delta },
        "tori_ok": rep.tori_ok(),
        "unipotents_ok": rep.unipotents_ok(),
        "assumptions": to_value(&rep),
    });
    let exit = if rep.certifiable() { Exit::Success } else { Exit::Precondition };
    Ok((v, exit))
}

pub struct OrbitArgs {
    pub p: u64,
    pub seed: u64,
    pub max_points: usize,
    pub dump: Option<PathBuf>,
    pub giant_budget: u64,
    pub primitivity_samples: usize,
    pub verify_keys: KeyVerification,
    pub timings: bool,
}

fn orbit_error_exit(e: &OrbitError) -> Exit {
    match e {
        OrbitError::Budget { .. } => Exit::Budget,
        OrbitError::GammaMismatch | OrbitError::DeltaMismatch | OrbitError::SignMismatch => Exit::Precondition,
        OrbitError::MissingImage(_) | OrbitError::EpsilonLeavesOrbit(_) | OrbitError::NoConjugator(_) => {
            Exit::Internal
        }
    }
}

pub fn orbit(a: &OrbitArgs) -> CmdResult {
    if a.max_points == 0 || a.giant_budget == 0 {
        return Err(Failure::new(Exit::Precondition, "budgets must be positive"));
    }
    let opts = PipelineOptions {
        seed: a.seed,
        budget: Budget { max_points: a.max_points },
        giant_budget: a.giant_budget,
        primitivity_samples: a.primitivity_samples,
        verify_keys: a.verify_keys,
        timings: a.timings,
        ..PipelineOptions::default()
    };
    let art = match witness::run_pipeline(a.p, &opts) {
        Ok(x) => x,
        Err(PipelineError::Orbit(e)) => {
            let exit = orbit_error_exit(&e);
            let mut f = Failure::new(exit, e.to_string());
            if let OrbitError::Budget { max_points, reached } = e {
                let assumptions = witness::build(a.p).ok().map(|c| to_value(&witness::check_assumptions(&c)));
                f = f.with_partial(json!({
                    "p": a.p,
                    "seed": a.seed,
                    "status": "budget_exhausted",
                    "stage": "enumerate",
                    "max_points": max_points,
                    "reached": reached,
                    "assumptions": assumptions,
                }));
            }
            return Err(f);
        }
        Err(e @ (PipelineError::Witness(_) | PipelineError::Assumptions(_))) => {
            return Err(Failure::new(Exit::Precondition, e.to_string()))
        }
    };
    if let Some(path) = &a.dump {
        atomic_write(path, &orbit::encode_dump(&art.orbit))?;
    }
    let r = &art.report;
    let lemmas_ok = r.lemmas.cycle_orders.iter().all(|&b| b)
        && r.lemmas.epsilon_squared_identity
        && r.lemmas.epsilon_relations
        && r.lemmas.f2_conjugate;
    let keys_ok = r.key_verification.as_ref().map_or(true, |k| k.agree);
    let cert_ok = r.certificate.as_ref().map_or(true, |c| c.revalidated);
    let blocks_ok = r.primitivity.trivial == r.primitivity.samples;
    let exit = if !(lemmas_ok && keys_ok && cert_ok && blocks_ok) {
        Exit::Internal
    } else if r.f2_alternating {
        Exit::Success
    } else {
        Exit::Precondition
    };
    Ok((to_value(r), exit))
}

pub struct CountArgs {
    pub p: u64,
    pub orbit: Option<PathBuf>,
    pub bound: u64,
}

pub fn count(a: &CountArgs) -> CmdResult {
    if a.p > a.bound {
        return Err(Failure::new(
            Exit::Budget,
            format!("refusing to count at p = {}: above the bound {} (raise --bound to force)", a.p, a.bound),
        ));
    }
    let cfg = witness::build(a.p).map_err(|e| match e {
        WitnessError::Field(_) | WitnessError::Degenerate { .. } => Failure::new(Exit::Precondition, e.to_string()),
    })?;
    let keys = witness::count_x_keys(&cfg.params, a.bound).map_err(|e| match e {
        witness::CountError::OverBudget { .. } => Failure::new(Exit::Budget, e.to_string()),
        witness::CountError::Assumption => Failure::new(Exit::Precondition, e.to_string()),
    })?;
    let mut v = json!({ "p": a.p, "x_count": keys.len() });
    if let Some(path) = &a.orbit {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::new(Exit::Precondition, format!("cannot read {}: {e}", path.display())))?;
        let dump = orbit::decode_dump(&bytes)
            .map_err(|e| Failure::new(Exit::Precondition, format!("bad orbit dump: {e}")))?;
        if dump.p != a.p {
            return Err(Failure::new(
                Exit::Precondition,
                format!("dump is for p = {}, not {}", dump.p, a.p),
            ));
        }
        let all: HashSet<_> = keys.iter().collect();
        let inside = dump.keys.iter().filter(|k| all.contains(k)).count();
        v["orbit_size"] = json!(dump.keys.len());
        v["orbit_keys_in_x"] = json!(inside);
        v["ratio"] = json!(dump.keys.len() as f64 / keys.len() as f64);
        if inside != dump.keys.len() {
            return Ok((v, Exit::Internal));
        }
    }
    Ok((v, Exit::Success))
}

pub struct QrepArgs {
    pub n: usize,
    pub ell: u32,
    pub verify: bool,
    pub specialize: Option<Vec<u64>>,
    pub export: Option<PathBuf>,
    pub export_specialized: Option<PathBuf>,
    pub max_n: usize,
    pub max_ell: u32,
}

fn qrep_failure(e: QrepError) -> Failure {
    match e {
        QrepError::Check(_) => Failure::new(Exit::Internal, e.to_string()),
        _ => Failure::new(Exit::Precondition, e.to_string()),
    }
}

pub fn qrep(a: &QrepArgs) -> CmdResult {
    if a.n < 2 || a.n > a.max_n || a.ell > a.max_ell {
        return Err(Failure::new(
            Exit::Precondition,
            format!(
                "need 2 <= n <= {} and l <= {} (raise --max-n / --max-ell to allow more)",
                a.max_n, a.max_ell
            ),
        ));
    }
    let hw = highest_weight_basis(a.n, a.ell).map_err(qrep_failure)?;
    let reps = hw.braid_matrices().map_err(qrep_failure)?;
    let mut v = json!({
        "n": a.n,
        "ell": a.ell,
        "dim": hw.dim(),
        "expected_dim": expected_dim(a.n, a.ell),
        "weight_space_dim": hw.v.len(),
        "full_twist": reps.full_twist_scalar().map(|x| x.to_string()),
    });
    if a.n == 2 {
        let (got, want) = two_strand_eigenvalue(a.ell).map_err(qrep_failure)?;
        v["eigenvalue"] = json!(got.to_string());
        v["eigenvalue_expected"] = json!(want.to_string());
    }
    let mut exit = Exit::Success;
    if a.verify {
        let mut checks: Vec<CheckResult> = verify_global(a.ell);
        checks.extend(verify_case(a.n, a.ell, true));
        if checks.iter().any(|c| !c.passed) {
            exit = Exit::Internal;
        }
        v["checks"] = to_value(&checks);
        v["all_passed"] = json!(exit == Exit::Success);
    }
    if let Some(path) = &a.export {
        atomic_write(path, to_json_string(&export(&reps)).as_bytes())?;
    }
    if let Some(point) = &a.specialize {
        let [r, q0, s0] = point[..] else {
            return Err(Failure::new(Exit::Precondition, "--specialize takes r q0 s0"));
        };
        let sp = specialize(a.n, a.ell, r, q0, s0).map_err(qrep_failure)?;
        if !(sp.relations_hold && sp.inverses_hold && sp.intertwiner_holds) {
            exit = Exit::Internal;
        }
        v["specialization"] = json!({
            "ok": sp.ok(),
            "summary": to_value(&sp),
        });
        if let Some(path) = &a.export_specialized {
            atomic_write(path, to_json_string(&export_specialized(&sp)).as_bytes())?;
        }
    } else if a.export_specialized.is_some() {
        return Err(Failure::new(Exit::Precondition, "--export-specialized needs --specialize"));
    }
    Ok((v, exit))
}

fn corpus() -> Vec<(String, Vec<Permutation>, usize)> {
    let cyc = |n: usize, c: &[u32]| Permutation::from_cycles(n, &[c]).unwrap();
    let mut out = Vec::new();
    for n in [5usize, 7, 8] {
        let long: Vec<u32> = (0..n as u32).collect();
        let odd_long: Vec<u32> = (1..n as u32).collect();
        out.push((format!("S{n}"), vec![cyc(n, &[0, 1]), cyc(n, &long)], n));
        let a_gens = if n % 2 == 1 {
            vec![cyc(n, &[0, 1, 2]), cyc(n, &long)]
        } else {
            vec![cyc(n, &[0, 1, 2]), cyc(n, &odd_long)]
        };
        out.push((format!("A{n}"), a_gens, n));
        out.push((format!("C{n}"), vec![cyc(n, &long)], n));
    }
    out
}

/// Fast end-to-end checks of each subsystem.
pub fn selftest() -> CmdResult {
    let mut checks: Vec<Value> = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(json!({ "name": name, "passed": passed, "detail": detail }));
    };

    let p = witness::find_prime(2, PrimeMode::Relaxed);
    push("least relaxed prime", p == 19, p.to_string());
    match witness::build(19) {
        Ok(cfg) => {
            let rep = witness::check_assumptions(&cfg);
            push("witness assumptions at 19", rep.certifiable(), format!("{:?}/{:?}", rep.gamma_class, rep.delta_class));
        }
        Err(e) => push("witness assumptions at 19", false, e.to_string()),
    }
    push("degenerate prime refused", witness::build(11).is_err(), String::new());

    for (name, gens, n) in corpus() {
        let exact = permgrp::schreier_sims(&gens, n).map(|b| b.order());
        let class = permgrp::classify_giant(&gens, n, &GiantConfig::default()).class;
        let order = exact.as_ref().map(|o| o.to_string()).unwrap_or_default();
        let nf: u64 = (1..=n as u64).product();
        let truth = match exact.as_ref().map(|o| o.to_string()) {
            Ok(s) if s == nf.to_string() => GiantClass::Symmetric,
            Ok(s) if s == (nf / 2).to_string() => GiantClass::Alternating,
            _ => GiantClass::Inconclusive,
        };
        push(&format!("classify {name}"), class == truth, order);
    }

    let mut qchecks = verify_global(4);
    for (n, ell) in [(3, 2), (4, 1), (4, 2)] {
        qchecks.extend(verify_case(n, ell, true));
    }
    for c in qchecks {
        push(&format!("qrep {}", c.name), c.passed, c.detail);
    }
    match specialize(4, 2, 1009, 2, 3) {
        Ok(sp) => push("specialization (4,2) mod 1009", sp.ok(), String::new()),
        Err(e) => push("specialization (4,2) mod 1009", false, e.to_string()),
    }

    let all = checks.iter().all(|c| c["passed"] == json!(true));
    let exit = if all { Exit::Success } else { Exit::Internal };
    Ok((json!({ "checks": checks, "all_passed": all }), exit))
}
