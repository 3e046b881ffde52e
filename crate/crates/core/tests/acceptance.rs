//! Acceptance suite: nine criteria, one PASS/FAIL line each.
//!
//! Every criterion runs even if an earlier one fails; the test fails at the
//! end if any line says FAIL.

mod common;

use std::time::{Duration, Instant};

use lolli_core::encoding::{mimicry_report, run_via_logic, LogicError};
use lolli_core::engine::{prove, Outcome, SearchConfig};
use lolli_core::kernel::text::parse_proof;
use lolli_core::kernel::{
    check_full, check_reduced, is_coincided, is_simple, is_uniform, nonuniformity_measure, ProofTree,
};
use lolli_core::lang::{
    eval_oracle, parse_program, sum_loop, sum_program, swap_program, EvalError, Memory, Program,
};
use lolli_core::normalize::{to_coincided, to_reduced, to_simple, to_uniform, to_uniform_observed};
use lolli_core::text::parse_formula;
use lolli_core::Signature;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NONUNIFORM: &str = include_str!("../../../data/proofs/with_imp_nonuniform.proof");
const UNIFORM: &str = include_str!("../../../data/proofs/with_imp_uniform.proof");
const FORWARD: &str = include_str!("../../../data/proofs/chain_forward.proof");
const BACKWARD: &str = include_str!("../../../data/proofs/chain_backward.proof");

const ORACLE_BUDGET: u64 = 100_000;

type Verdict = Result<String, String>;

/// Proofs emitted by the engine, for the self-validation criterion.
#[derive(Default)]
struct Emitted {
    proofs: Vec<(String, ProofTree)>,
}

impl Emitted {
    fn add(&mut self, label: impl Into<String>, p: ProofTree) {
        self.proofs.push((label.into(), p));
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, cap: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= cap, || format!("{what} took {t:.2?}, over the {cap:?} cap"))
}

fn parse(src: &str) -> Result<ProofTree, String> {
    parse_proof(src, &mut Signature::new()).map_err(|e| e.to_string())
}

fn bundled_corpus() -> Verdict {
    let start = Instant::now();
    let expect: [(&str, &str, fn(&ProofTree) -> bool); 4] = [
        ("non-uniform", NONUNIFORM, |p| !is_uniform(p)),
        ("uniform", UNIFORM, is_uniform),
        ("forward chaining (not simple)", FORWARD, |p| !is_simple(p)),
        ("backward chaining (simple, coincided)", BACKWARD, |p| is_simple(p) && is_coincided(p)),
    ];
    for (name, src, verdict) in expect {
        let p = parse(src)?;
        check_full(&p).map_err(|v| format!("{name}: {v}"))?;
        ensure(verdict(&p), || format!("{name}: classifier verdict differs"))?;
    }
    within(start, Duration::from_secs(1), "corpus")?;
    Ok("4 proofs check; classifier verdicts as expected".into())
}

fn unprovability(emitted: &mut Emitted) -> Verdict {
    let start = Instant::now();
    let mut sig = Signature::new();
    let lolli = parse_formula("a1 & a2 -o a1 * a2", &mut sig).map_err(|e| e.to_string())?;
    let imp = parse_formula("a1 & a2 => a1 * a2", &mut sig).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::default();
    match prove(&[], &[], &lolli, &cfg).map_err(|e| e.to_string())? {
        Outcome::Unprovable { .. } => {}
        other => return Err(format!("-o variant: expected unprovable, got {:?}", other.proved().is_some())),
    }
    match prove(&[], &[], &imp, &cfg).map_err(|e| e.to_string())? {
        Outcome::Proved(p) => emitted.add("=> variant", p.tree),
        _ => return Err("=> variant is not proved".into()),
    }
    within(start, Duration::from_secs(1), "search")?;
    Ok("-o variant unprovable, => variant proved".into())
}

fn normalization_chain(corpus: &[ProofTree]) -> Verdict {
    let start = Instant::now();
    for (i, p) in corpus.iter().enumerate() {
        let fail = |stage: &str, e: String| format!("proof #{i} at {stage}: {e}");
        let u = to_uniform(p).map_err(|e| fail("uniform", e.to_string()))?.proof;
        ensure(is_uniform(&u), || fail("uniform", "output not uniform".into()))?;
        let s = to_simple(&u).map_err(|e| fail("simple", e.to_string()))?.proof;
        ensure(is_simple(&s), || fail("simple", "output not simple".into()))?;
        let c = to_coincided(&s).map_err(|e| fail("coincided", e.to_string()))?.proof;
        ensure(is_coincided(&c), || fail("coincided", "output not coincided".into()))?;
        let r = to_reduced(&c).map_err(|e| fail("reduced", e.to_string()))?;
        check_reduced(&r).map_err(|v| fail("reduced", v.to_string()))?;
        ensure(r.same_conclusion(p), || fail("reduced", "end-sequent changed".into()))?;
    }
    within(start, Duration::from_secs(120), "normalization")?;
    let nonuniform = corpus.iter().filter(|p| !is_uniform(p)).count();
    Ok(format!("{} brute-force proofs ({nonuniform} non-uniform) reduce with end-sequents kept", corpus.len()))
}

/// One oracle run and one logic run of the same program.
struct Pair {
    program: Program,
    oracle: Result<lolli_core::lang::Evaluation, EvalError>,
    logic: Result<lolli_core::encoding::LogicRun, LogicError>,
}

fn differential(pairs: &mut Vec<Pair>, emitted: &mut Emitted) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut agreed, mut stuck) = (0, 0);
    for i in 0..500 {
        let p = common::programs::expr(&mut rng, 3, 4);
        let m = common::programs::memory(&mut rng, 3);
        let oracle = eval_oracle(&p, &m, ORACLE_BUDGET);
        // Loop-free programs evaluate each node once.
        let budget = 10 * p.size() as u64 + 100;
        let logic = run_via_logic(&p, &m, &SearchConfig { budget });
        match (&oracle, &logic) {
            (Ok(o), Ok(l)) => {
                ensure(o.value == l.value && o.memory == l.memory, || {
                    format!("#{i} `{p}`: oracle {} {:?}, logic {} {:?}", o.value, o.memory, l.value, l.memory)
                })?;
                emitted.add(format!("program #{i}"), l.proof.clone());
                agreed += 1;
            }
            (Err(EvalError::Stuck { .. }), Err(LogicError::Unprovable { .. })) => stuck += 1,
            (o, l) => {
                return Err(format!("#{i} `{p}`: oracle {:?}, logic {:?}", o.as_ref().err(), l.as_ref().err()))
            }
        }
        pairs.push(Pair { program: p, oracle, logic });
    }
    within(start, Duration::from_secs(60), "differential")?;
    Ok(format!("500 programs: {agreed} agree on value and memory, {stuck} stuck and unprovable"))
}

fn swap(emitted: &mut Emitted) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = swap_program();
    for _ in 0..100 {
        let (a, b, c) = (rng.gen_range(0..1000), rng.gen_range(0..1000), rng.gen_range(0..1000));
        let m = Memory::from([(0, a), (1, b), (2, c)]);
        let want = Memory::from([(0, b), (1, a), (2, a)]);
        let o = eval_oracle(&p, &m, ORACLE_BUDGET).map_err(|e| e.to_string())?;
        let l = run_via_logic(&p, &m, &SearchConfig::default()).map_err(|e| e.to_string())?;
        for (side, value, memory) in [("oracle", o.value, &o.memory), ("logic", l.value, &l.memory)] {
            ensure(value == a && *memory == want, || format!("{side} on ({a},{b},{c}): {value} {memory:?}"))?;
        }
        emitted.add(format!("swap ({a},{b},{c})"), l.proof);
    }
    within(start, Duration::from_secs(5), "swap")?;
    Ok("100 memories swapped on both paths".into())
}

fn sum_totality(emitted: &mut Emitted) -> Verdict {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    for n in 0..=25u64 {
        let triangle = n * (n + 1) / 2;
        for n2 in [0, 5, 17] {
            let m = Memory::from([(0, n2), (1, n)]);
            let u = sum_loop();
            let o = eval_oracle(&u, &m, ORACLE_BUDGET).map_err(|e| e.to_string())?;
            let l = run_via_logic(&u, &m, &cfg).map_err(|e| format!("U, N={n}, n2={n2}: {e}"))?;
            for (side, value, memory) in [("oracle", o.value, &o.memory), ("logic", l.value, &l.memory)] {
                ensure(value == 0 && memory[&0] == n2 + triangle, || {
                    format!("U on {side}, N={n}, n2={n2}: value {value}, loc0 {}", memory[&0])
                })?;
            }
            emitted.add(format!("U N={n} n2={n2}"), l.proof);

            let v = sum_program(n);
            let m = Memory::from([(0, n2), (1, 0)]);
            let o = eval_oracle(&v, &m, ORACLE_BUDGET).map_err(|e| e.to_string())?;
            let l = run_via_logic(&v, &m, &cfg).map_err(|e| format!("V, N={n}: {e}"))?;
            for (side, memory) in [("oracle", &o.memory), ("logic", &l.memory)] {
                ensure(memory[&0] == triangle, || format!("V on {side}, N={n}: loc0 {}", memory[&0]))?;
            }
            emitted.add(format!("V N={n} n2={n2}"), l.proof);
        }
    }
    within(start, Duration::from_secs(30), "sums")?;
    Ok("U and V correct for N in 0..=25, n2 in {0, 5, 17}, on both paths".into())
}

fn mimicry(pairs: &[Pair], emitted: &mut Emitted) -> Verdict {
    let start = Instant::now();
    let mut checked = 0;
    for pair in pairs {
        if let (Ok(o), Ok(l)) = (&pair.oracle, &pair.logic) {
            let report = mimicry_report(&o.derivation, &l.proof);
            ensure(report.ok(), || format!("`{}`:\n{report}", pair.program))?;
            checked += 1;
        }
    }
    let fragment = parse_program("1 <- *2").map_err(|e| e.to_string())?;
    let m = Memory::from([(1, 3), (2, 4)]);
    let o = eval_oracle(&fragment, &m, ORACLE_BUDGET).map_err(|e| e.to_string())?;
    let l = run_via_logic(&fragment, &m, &SearchConfig::default()).map_err(|e| e.to_string())?;
    let report = mimicry_report(&o.derivation, &l.proof);
    let (oracle, bc): (usize, usize) = report.rows.iter().fold((0, 0), |(a, b), r| (a + r.oracle, b + r.bc));
    ensure(report.ok() && oracle == 4 && bc == 4, || format!("fragment: {oracle} vs {bc}\n{report}"))?;
    emitted.add("fragment", l.proof);
    within(start, Duration::from_secs(60), "mimicry")?;
    Ok(format!("{checked} agreeing runs match rule for clause; fragment 4 vs 4"))
}

fn divergence() -> Verdict {
    let start = Instant::now();
    let p = parse_program("while 1 > 0 do 0 <- 0").map_err(|e| e.to_string())?;
    let m = Memory::from([(0, 0)]);
    let o = eval_oracle(&p, &m, ORACLE_BUDGET);
    ensure(matches!(o, Err(EvalError::BudgetExhausted { .. })), || format!("oracle: {:?}", o.err()))?;
    let l = run_via_logic(&p, &m, &SearchConfig::default());
    ensure(matches!(l, Err(LogicError::BudgetExhausted { .. })), || format!("logic: {:?}", l.err()))?;
    within(start, Duration::from_secs(10), "divergence")?;
    Ok(format!("budget exhausted on both paths in {:.2?}", start.elapsed()))
}

fn self_validation(emitted: &Emitted, corpus: &[ProofTree]) -> Verdict {
    for (label, p) in &emitted.proofs {
        check_reduced(p).map_err(|v| format!("{label}: {v}"))?;
    }
    let nonuniform = parse(NONUNIFORM)?;
    let mut inputs: Vec<&ProofTree> = corpus.iter().collect();
    inputs.push(&nonuniform);
    let mut eliminations = 0;
    for (i, p) in inputs.iter().enumerate() {
        let mut last = nonuniformity_measure(p);
        let mut bad = None;
        to_uniform_observed(p, &mut |q| {
            let now = nonuniformity_measure(q);
            if now >= last && bad.is_none() {
                bad = Some((last, now));
            }
            last = now;
            eliminations += 1;
        })
        .map_err(|e| format!("input #{i}: {e}"))?;
        if let Some((before, after)) = bad {
            return Err(format!("input #{i}: measure went from {before} to {after}"));
        }
    }
    Ok(format!(
        "{} engine proofs pass the reduced checker; measure fell at all {eliminations} eliminations",
        emitted.proofs.len()
    ))
}

#[test]
fn acceptance() {
    let (_, corpus) = common::bruteforce::proof_corpus(3, 1500, 2000, 7);
    let mut emitted = Emitted::default();
    let mut pairs = Vec::new();

    let results = [
        ("bundled proof corpus", bundled_corpus()),
        ("unprovability", unprovability(&mut emitted)),
        ("normalization chain", normalization_chain(&corpus)),
        ("engine/oracle differential", differential(&mut pairs, &mut emitted)),
        ("swap", swap(&mut emitted)),
        ("sum totality", sum_totality(&mut emitted)),
        ("mimicry", mimicry(&pairs, &mut emitted)),
        ("divergence", divergence()),
        ("kernel self-validation", self_validation(&emitted, &corpus)),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {} {name}: PASS ({msg})", i + 1),
            Err(msg) => {
                println!("criterion {} {name}: FAIL ({msg})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
