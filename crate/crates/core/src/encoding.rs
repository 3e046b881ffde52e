//! Programs as terms, memory as linear resources, and evaluation as
//! backchaining on ten clauses for the predicate `e`.
//!
//! `e P N C` holds when program `P` returns `N` and the continuation `C` is
//! provable in the memory left behind. A memory cell is an atom `m l v`;
//! reading or writing a cell removes it and puts back a (possibly new) copy
//! through `m l v * (m l v' -o C)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::engine::{prove, BcEvent, ClauseRef, EngineError, Outcome, SearchConfig, Substitution};
use crate::formula::Formula;
use crate::kernel::{ProofTree, Rule};
use crate::lang::{Derivation, EvalRule, Memory, Program};
use crate::term::{MetaVar, SimpleType, Term};
use crate::text::{parse_formula, Signature};

/// Names of the clauses of [`gamma_clauses`], in order.
pub const CLAUSE_NAMES: [&str; 10] = ["value", "add", "sub", "gt", "le", "get", "set", "seq", "whileTrue", "whileFalse"];

// Variables only in a body are quantified at the front with the rest; the
// two readings are equivalent. The loop guard is tested right after it is
// computed so a false guard never runs the body.
const CLAUSES: [&str; 10] = [
    "all n : nat. all c : o. c -o e (v n) n c",
    "all a : prog. all b : prog. all n1 : nat. all n2 : nat. all n3 : nat. all c : o.
       e a n1 (e b n2 (#add3 n1 n2 n3 * c)) -o e (add a b) n3 c",
    "all a : prog. all b : prog. all n1 : nat. all n2 : nat. all n3 : nat. all c : o.
       e a n1 (e b n2 (#sub3 n1 n2 n3 * c)) -o e (sub a b) n3 c",
    "all a : prog. all b : prog. all n1 : nat. all n2 : nat. all c : o.
       e a n1 (e b n2 (#gt n1 n2 * c)) -o e (gt a b) 1 c",
    "all a : prog. all b : prog. all n1 : nat. all n2 : nat. all c : o.
       e a n1 (e b n2 (#le n1 n2 * c)) -o e (gt a b) 0 c",
    "all a : prog. all n1 : nat. all n2 : nat. all c : o.
       e a n1 (m n1 n2 * (m n1 n2 -o c)) -o e (get a) n2 c",
    "all a : prog. all b : prog. all n1 : nat. all n2 : nat. all n3 : nat. all c : o.
       e a n1 (e b n2 (m n1 n3 * (m n1 n2 -o c))) -o e (set a b) n2 c",
    "all a : prog. all b : prog. all n1 : nat. all n2 : nat. all c : o.
       e a n1 (e b n2 c) -o e (sq a b) n2 c",
    "all a : prog. all b : prog. all n1 : nat. all n2 : nat. all c : o.
       e a n1 (#gt n1 0 * e b n2 (e (wh a b) 0 c)) -o e (wh a b) 0 c",
    "all a : prog. all b : prog. all n1 : nat. all c : o.
       e a n1 (#eq n1 0 * c) -o e (wh a b) 0 c",
];

/// Constants of the encoding.
pub fn signature() -> Signature {
    let (nat, prog, o) = (SimpleType::Nat, SimpleType::Prog, SimpleType::O);
    let mut sig = Signature::strict();
    let binary = SimpleType::curried(&[prog.clone(), prog.clone()], prog.clone());
    let decls = [
        ("v", SimpleType::arrow(nat.clone(), prog.clone())),
        ("add", binary.clone()),
        ("sub", binary.clone()),
        ("gt", binary.clone()),
        ("get", SimpleType::arrow(prog.clone(), prog.clone())),
        ("set", binary.clone()),
        ("sq", binary.clone()),
        ("wh", binary),
        ("e", SimpleType::curried(&[prog, nat.clone(), o.clone()], o.clone())),
        ("m", SimpleType::curried(&[nat.clone(), nat], o)),
    ];
    for (name, ty) in decls {
        sig.declare(name, ty).expect("fresh signature");
    }
    sig
}

/// The ten evaluation clauses, named by [`CLAUSE_NAMES`].
pub fn gamma_clauses() -> Vec<Formula> {
    let mut sig = signature();
    CLAUSES.iter().map(|src| parse_formula(src, &mut sig).expect("built-in clause")).collect()
}

/// The clause modelling each evaluation rule.
pub fn clause_for(rule: EvalRule) -> usize {
    match rule {
        EvalRule::Num => 0,
        EvalRule::Add => 1,
        EvalRule::Sub => 2,
        EvalRule::GtTrue => 3,
        EvalRule::GtFalse => 4,
        EvalRule::Deref => 5,
        EvalRule::Assign => 6,
        EvalRule::Seq => 7,
        EvalRule::WhileTrue => 8,
        EvalRule::WhileFalse => 9,
    }
}

fn constant(name: &str) -> Term {
    static SIG: OnceLock<Signature> = OnceLock::new();
    let sig = SIG.get_or_init(signature);
    Term::constant(sig.get(name).expect("encoding constant").clone())
}

pub fn translate_program(p: &Program) -> Term {
    let bin = |name: &str, a: &Program, b: &Program| {
        Term::apps(constant(name), [translate_program(a), translate_program(b)])
    };
    match p {
        Program::Num(n) => Term::app(constant("v"), Term::nat(*n)),
        Program::Add(a, b) => bin("add", a, b),
        Program::Sub(a, b) => bin("sub", a, b),
        Program::Gt(a, b) => bin("gt", a, b),
        Program::Deref(a) => Term::app(constant("get"), translate_program(a)),
        Program::Assign(a, b) => bin("set", a, b),
        Program::Seq(a, b) => bin("sq", a, b),
        Program::While(a, b) => bin("wh", a, b),
    }
}

pub fn memory_atom(loc: u64, value: Term) -> Formula {
    Formula::atom(constant("m"), [Term::nat(loc), value])
}

/// One `m l v` per cell, in location order.
pub fn translate_memory(m: &Memory) -> Vec<Formula> {
    m.iter().map(|(&l, &v)| memory_atom(l, Term::nat(v))).collect()
}

pub fn eval_atom(p: Term, value: Term, cont: Formula) -> Formula {
    Formula::atom(constant("e"), [p, value, cont.into_term()])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Continuation `top`: the final memory is thrown away.
    Discard,
    /// Continuation `m 0 V0 * (... * top)` over the locations of the input
    /// memory, binding each `Vl` to the final content of `l`.
    Collect,
}

#[derive(Clone, Debug)]
pub struct Query {
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
    pub goal: Formula,
    /// Metavariable for the returned value.
    pub value: Term,
    /// Metavariables for the final memory, by location.
    pub cells: Vec<(u64, Term)>,
}

pub fn build_query(p: &Program, m: &Memory, mode: Mode) -> Query {
    Query::new(p, m, mode, m.keys().copied())
}

impl Query {
    /// Collect only the given locations (ignored in discard mode).
    pub fn new(p: &Program, m: &Memory, mode: Mode, locs: impl IntoIterator<Item = u64>) -> Query {
        let nat = |id| Term::meta(MetaVar { id, ty: SimpleType::Nat });
        let value = nat(0);
        let cells: Vec<(u64, Term)> = match mode {
            Mode::Discard => Vec::new(),
            Mode::Collect => locs.into_iter().enumerate().map(|(i, l)| (l, nat(i as u32 + 1))).collect(),
        };
        let cont = cells
            .iter()
            .rev()
            .fold(Formula::top(), |acc, (l, v)| Formula::tensor(memory_atom(*l, v.clone()), acc));
        Query {
            gamma: gamma_clauses(),
            delta: translate_memory(m),
            goal: eval_atom(translate_program(p), value.clone(), cont),
            value,
            cells,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LogicRun {
    pub value: u64,
    pub memory: Memory,
    pub proof: ProofTree,
    pub trace: Vec<BcEvent>,
    pub subst: Substitution,
    /// Backchaining steps attempted.
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("no proof exists ({steps} backchaining steps tried)")]
    Unprovable { steps: u64 },
    #[error("search budget exhausted after {steps} backchaining steps")]
    BudgetExhausted { steps: u64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("result `{0}` is not a numeral")]
    NotANumeral(String),
}

/// Evaluate by proof search on the collect-mode query.
pub fn run_via_logic(p: &Program, m: &Memory, cfg: &SearchConfig) -> Result<LogicRun, LogicError> {
    let q = build_query(p, m, Mode::Collect);
    let proved = match prove(&q.gamma, &q.delta, &q.goal, cfg)? {
        Outcome::Proved(p) => *p,
        Outcome::Unprovable { steps } => return Err(LogicError::Unprovable { steps }),
        Outcome::BudgetExhausted { steps } => return Err(LogicError::BudgetExhausted { steps }),
    };
    let read = |t: &Term| {
        let r = proved.subst.resolve(t);
        r.as_nat().ok_or_else(|| LogicError::NotANumeral(r.to_string()))
    };
    let value = read(&q.value)?;
    let mut memory = Memory::new();
    for (l, v) in &q.cells {
        memory.insert(*l, read(v)?);
    }
    Ok(LogicRun { value, memory, proof: proved.tree, trace: proved.trace, subst: proved.subst, steps: proved.steps })
}

/// Trace line with evaluation clauses named.
pub fn describe_event(ev: &BcEvent) -> String {
    match ev.clause {
        ClauseRef::Unbounded(i) if i < CLAUSE_NAMES.len() => format!("{} {} {}", ev.rule, CLAUSE_NAMES[i], ev.head),
        _ => ev.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MimicryRow {
    pub rule: EvalRule,
    pub oracle: usize,
    pub bc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MimicryReport {
    pub rows: Vec<MimicryRow>,
}

impl MimicryReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(|r| r.oracle == r.bc)
    }

    pub fn mismatches(&self) -> Vec<EvalRule> {
        self.rows.iter().filter(|r| r.oracle != r.bc).map(|r| r.rule).collect()
    }
}

impl fmt::Display for MimicryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>6} {:>6}", "rule-tag", "oracle", "bc")?;
        for r in &self.rows {
            writeln!(f, "{:<12} {:>6} {:>6}", r.rule.name(), r.oracle, r.bc)?;
        }
        if self.ok() {
            writeln!(f, "verdict: ok")
        } else {
            let bad: Vec<&str> = self.mismatches().iter().map(|r| r.name()).collect();
            writeln!(f, "verdict: mismatch ({})", bad.join(", "))
        }
    }
}

/// Compare rule instances of `d` with backchaining steps on the
/// corresponding clauses in `t`. Steps on memory cells, the collector and
/// builtin leaves are not counted.
pub fn mimicry_report(d: &Derivation, t: &ProofTree) -> MimicryReport {
    let clauses = gamma_clauses();
    let mut bc: BTreeMap<usize, usize> = BTreeMap::new();
    t.visit(&mut |_, n| {
        if n.rule == Rule::BCu {
            if let Some(i) = n.principal_formula().and_then(|f| clauses.iter().position(|c| c == f)) {
                *bc.entry(i).or_default() += 1;
            }
        }
    });
    let rows = EvalRule::ALL
        .iter()
        .map(|&rule| MimicryRow {
            rule,
            oracle: d.count(rule),
            bc: bc.get(&clause_for(rule)).copied().unwrap_or(0),
        })
        .collect();
    MimicryReport { rows }
}
