//! Sequents, proof trees and their checkers.
//!
//! Two systems are checked: the full calculus (right rules, left rules,
//! `id`, `absorb`) and the backchaining system (right rules, `id`, `BCu`,
//! `BCb`). Both accept `builtin` leaves for ground arithmetic relations.

mod classify;
mod expand;
pub mod text;

use std::fmt;

use thiserror::Error;

use crate::formula::{elaborate, ClauseTriple, Formula, View};
use crate::term::{infer_type, MetaVar, Node, Term, TypeEnv};

pub use classify::{
    compute_marking, is_coincided, is_simple, is_uniform, nonuniformity_measure, uniformity, Marking, UniformityReport,
};
pub use expand::expand_reduced;
pub(crate) use classify::{is_offender, left_product, main_premise};

/// `Γ ; Δ ⊢ G`. Γ is read as a set and Δ as a multiset; their vector order
/// only matters for principal positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub gamma: Vec<Formula>,
    pub delta: Vec<Formula>,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(gamma: Vec<Formula>, delta: Vec<Formula>, goal: Formula) -> Sequent {
        Sequent { gamma, delta, goal }
    }

    /// Same Γ as a set, same Δ as a multiset, same goal.
    pub fn same_as(&self, other: &Sequent) -> bool {
        self.goal == other.goal && set_eq(&self.gamma, &other.gamma) && multiset_eq(&self.delta, &other.delta)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formulas(f, &self.gamma)?;
        f.write_str(" ; ")?;
        write_formulas(f, &self.delta)?;
        write!(f, " |- {}", self.goal)
    }
}

pub(crate) fn write_formulas(f: &mut dyn fmt::Write, xs: &[Formula]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Id,
    Absorb,
    TopR,
    WithL1,
    WithL2,
    WithR,
    LolliL,
    LolliR,
    ImpL,
    ImpR,
    ForallL,
    ForallR,
    ExistsR,
    BangR,
    OplusR1,
    OplusR2,
    TensorR,
    BCu,
    BCb,
    Builtin,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::Id,
        Rule::Absorb,
        Rule::TopR,
        Rule::WithL1,
        Rule::WithL2,
        Rule::WithR,
        Rule::LolliL,
        Rule::LolliR,
        Rule::ImpL,
        Rule::ImpR,
        Rule::ForallL,
        Rule::ForallR,
        Rule::ExistsR,
        Rule::BangR,
        Rule::OplusR1,
        Rule::OplusR2,
        Rule::TensorR,
        Rule::BCu,
        Rule::BCb,
        Rule::Builtin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::Absorb => "absorb",
            Rule::TopR => "topR",
            Rule::WithL1 => "withL1",
            Rule::WithL2 => "withL2",
            Rule::WithR => "withR",
            Rule::LolliL => "lolliL",
            Rule::LolliR => "lolliR",
            Rule::ImpL => "impL",
            Rule::ImpR => "impR",
            Rule::ForallL => "forallL",
            Rule::ForallR => "forallR",
            Rule::ExistsR => "existsR",
            Rule::BangR => "bangR",
            Rule::OplusR1 => "oplusR1",
            Rule::OplusR2 => "oplusR2",
            Rule::TensorR => "tensorR",
            Rule::BCu => "BCu",
            Rule::BCb => "BCb",
            Rule::Builtin => "builtin",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Left introduction rules acting on a Δ formula.
    pub fn is_left(self) -> bool {
        matches!(self, Rule::WithL1 | Rule::WithL2 | Rule::LolliL | Rule::ImpL | Rule::ForallL)
    }

    pub fn is_right(self) -> bool {
        matches!(
            self,
            Rule::TopR
                | Rule::WithR
                | Rule::LolliR
                | Rule::ImpR
                | Rule::ForallR
                | Rule::ExistsR
                | Rule::BangR
                | Rule::OplusR1
                | Rule::OplusR2
                | Rule::TensorR
        )
    }

    pub fn is_bc(self) -> bool {
        matches!(self, Rule::BCu | Rule::BCb)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A derivation. `principal` indexes Δ for `id`, left rules and `BCb`, and Γ
/// for `absorb` and `BCu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<ProofTree>,
    pub principal: Option<usize>,
    pub witness: Option<Term>,
    pub triple: Option<ClauseTriple>,
}

impl ProofTree {
    pub fn new(rule: Rule, conclusion: Sequent, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree { rule, conclusion, premises, principal: None, witness: None, triple: None }
    }

    pub fn with_principal(mut self, i: usize) -> ProofTree {
        self.principal = Some(i);
        self
    }

    pub fn with_witness(mut self, t: Term) -> ProofTree {
        self.witness = Some(t);
        self
    }

    pub fn with_triple(mut self, t: ClauseTriple) -> ProofTree {
        self.triple = Some(t);
        self
    }

    /// Same end-sequent up to context order.
    pub fn same_conclusion(&self, other: &ProofTree) -> bool {
        self.conclusion.same_as(&other.conclusion)
    }

    pub fn goal(&self) -> &Formula {
        &self.conclusion.goal
    }

    /// The Δ formula acted on, for rules with a Δ principal.
    pub fn principal_formula(&self) -> Option<&Formula> {
        match self.rule {
            Rule::Absorb | Rule::BCu => self.conclusion.gamma.get(self.principal?),
            _ => self.conclusion.delta.get(self.principal?),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_, _| n += 1);
        n
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    /// Pre-order traversal with node paths.
    pub fn visit(&self, f: &mut dyn FnMut(&[usize], &ProofTree)) {
        let mut path = Vec::new();
        self.visit_at(&mut path, f);
    }

    fn visit_at(&self, path: &mut Vec<usize>, f: &mut dyn FnMut(&[usize], &ProofTree)) {
        f(path, self);
        for (i, p) in self.premises.iter().enumerate() {
            path.push(i);
            p.visit_at(path, f);
            path.pop();
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&ProofTree> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get(i)?;
        }
        Some(cur)
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        let mut n = 0;
        self.visit(&mut |_, t| {
            if t.rule == rule {
                n += 1
            }
        });
        n
    }
}

impl Drop for ProofTree {
    // Engine proofs can be thousands of nodes deep; unlink iteratively.
    fn drop(&mut self) {
        let mut stack = std::mem::take(&mut self.premises);
        while let Some(mut t) = stack.pop() {
            stack.append(&mut t.premises);
        }
    }
}

pub fn format_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// First offending node found by a checker.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} at {}: {reason}", format_path(path))]
pub struct Violation {
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum System {
    Full,
    Reduced,
}

pub fn check_full(p: &ProofTree) -> Result<(), Violation> {
    check(p, System::Full)
}

pub fn check_reduced(p: &ProofTree) -> Result<(), Violation> {
    check(p, System::Reduced)
}

pub fn check(p: &ProofTree, system: System) -> Result<(), Violation> {
    let root = &p.conclusion;
    let here = |reason: String| Violation { path: vec![], rule: p.rule, reason };
    for f in root.gamma.iter().chain(&root.delta) {
        if !f.is_clause() {
            return Err(here(format!("context formula `{f}` is not a program clause")));
        }
    }
    if !root.goal.is_goal() {
        return Err(here(format!("`{}` is not a goal formula", root.goal)));
    }
    let mut fresh_base = 1u32 << 30;
    let mut path = Vec::new();
    check_at(p, system, &mut path, &mut fresh_base)
}

fn check_at(p: &ProofTree, system: System, path: &mut Vec<usize>, fresh: &mut u32) -> Result<(), Violation> {
    check_node(p, system, fresh).map_err(|reason| Violation { path: path.clone(), rule: p.rule, reason })?;
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        check_at(q, system, path, fresh)?;
        path.pop();
    }
    Ok(())
}

// -- multiset helpers -----------------------------------------------------

pub(crate) fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (j, y) in b.iter().enumerate() {
            if !used[j] && x == y {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub(crate) fn set_eq(a: &[Formula], b: &[Formula]) -> bool {
    a.iter().all(|x| b.contains(x)) && b.iter().all(|x| a.contains(x))
}

/// `xs` without the element at `i`.
pub(crate) fn without(xs: &[Formula], i: usize) -> Vec<Formula> {
    let mut v = xs.to_vec();
    v.remove(i);
    v
}

/// Remove one copy of `f`; `None` if absent.
pub(crate) fn remove_one(xs: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let i = xs.iter().position(|x| x == f)?;
    Some(without(xs, i))
}

pub(crate) fn plus(xs: &[Formula], f: &Formula) -> Vec<Formula> {
    let mut v = xs.to_vec();
    v.push(f.clone());
    v
}

/// `xs` with one copy of each element of `ys` removed; `None` if some
/// element is missing.
pub(crate) fn minus(xs: &[Formula], ys: &[Formula]) -> Option<Vec<Formula>> {
    let mut v = xs.to_vec();
    for y in ys {
        let i = v.iter().position(|x| x == y)?;
        v.remove(i);
    }
    Some(v)
}

pub(crate) fn union(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

// -- node checking ---------------------------------------------------------

type NodeResult = Result<(), String>;

fn arity(p: &ProofTree, n: usize) -> NodeResult {
    if p.premises.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} premise(s), found {}", p.premises.len()))
    }
}

fn same_gamma(p: &ProofTree, q: &ProofTree) -> NodeResult {
    if set_eq(&p.conclusion.gamma, &q.conclusion.gamma) {
        Ok(())
    } else {
        Err("premise changes the unbounded context".into())
    }
}

fn same_goal(p: &ProofTree, q: &ProofTree) -> NodeResult {
    if p.conclusion.goal == q.conclusion.goal {
        Ok(())
    } else {
        Err(format!("premise goal `{}` differs from `{}`", q.conclusion.goal, p.conclusion.goal))
    }
}

fn delta_is(q: &ProofTree, expected: &[Formula], what: &str) -> NodeResult {
    if multiset_eq(&q.conclusion.delta, expected) {
        Ok(())
    } else {
        let mut s = String::new();
        let _ = write_formulas(&mut s, expected);
        let mut t = String::new();
        let _ = write_formulas(&mut t, &q.conclusion.delta);
        Err(format!("{what}: bounded context is [{t}], expected [{s}]"))
    }
}

fn goal_is(q: &ProofTree, g: &Formula) -> NodeResult {
    if q.conclusion.goal == *g {
        Ok(())
    } else {
        Err(format!("premise goal `{}`, expected `{g}`", q.conclusion.goal))
    }
}

fn principal_delta(p: &ProofTree) -> Result<(usize, Formula), String> {
    let i = p.principal.ok_or("missing principal position")?;
    let f = p.conclusion.delta.get(i).ok_or_else(|| format!("principal position {i} outside the bounded context"))?;
    Ok((i, f.clone()))
}

fn principal_gamma(p: &ProofTree) -> Result<(usize, Formula), String> {
    let i = p.principal.ok_or("missing principal position")?;
    let f = p.conclusion.gamma.get(i).ok_or_else(|| format!("principal position {i} outside the unbounded context"))?;
    Ok((i, f.clone()))
}

fn witness(p: &ProofTree) -> Result<&Term, String> {
    p.witness.as_ref().ok_or_else(|| "missing witness term".to_string())
}

fn check_witness_type(t: &Term, ty: &crate::term::SimpleType) -> NodeResult {
    match infer_type(t, &TypeEnv::new()) {
        Ok(found) if found == *ty => Ok(()),
        Ok(found) => Err(format!("witness `{t}` has type {found}, expected {ty}")),
        Err(e) => Err(format!("witness `{t}` is ill-typed: {e}")),
    }
}

/// Ground natural-number arguments, if all are numerals.
pub(crate) fn ground_nats(args: &[Term]) -> Option<Vec<u64>> {
    args.iter().map(Term::as_nat).collect()
}

fn check_node(p: &ProofTree, system: System, fresh: &mut u32) -> NodeResult {
    let s = &p.conclusion;
    let goal_view = s.goal.view();
    match p.rule {
        Rule::Id => {
            arity(p, 0)?;
            let (_, a) = principal_delta(p)?;
            if s.delta.len() != 1 {
                return Err(format!("id needs exactly one bounded formula, found {}", s.delta.len()));
            }
            if !s.goal.is_atom() {
                return Err("id on a non-atomic goal".into());
            }
            if a != s.goal {
                return Err(format!("`{a}` does not match goal `{}`", s.goal));
            }
            Ok(())
        }
        Rule::Builtin => {
            arity(p, 0)?;
            if !s.delta.is_empty() {
                return Err("builtin leaf with nonempty bounded context".into());
            }
            match goal_view {
                View::Builtin(rel, args) => match ground_nats(&args) {
                    Some(ns) if rel.holds(&ns) => Ok(()),
                    Some(_) => Err(format!("`{}` is false", s.goal)),
                    None => Err(format!("`{}` has non-numeral arguments", s.goal)),
                },
                _ => Err("builtin leaf on a non-builtin goal".into()),
            }
        }
        Rule::TopR => {
            arity(p, 0)?;
            match goal_view {
                View::Top => Ok(()),
                _ => Err("topR on a goal other than top".into()),
            }
        }
        Rule::WithR => {
            arity(p, 2)?;
            let View::With(g1, g2) = goal_view else { return Err("withR on a non-& goal".into()) };
            for (q, g) in p.premises.iter().zip([&g1, &g2]) {
                same_gamma(p, q)?;
                delta_is(q, &s.delta, "withR premise")?;
                goal_is(q, g)?;
            }
            Ok(())
        }
        Rule::TensorR => {
            arity(p, 2)?;
            let View::Tensor(g1, g2) = goal_view else { return Err("tensorR on a non-* goal".into()) };
            let (l, r) = (&p.premises[0], &p.premises[1]);
            same_gamma(p, l)?;
            same_gamma(p, r)?;
            goal_is(l, &g1)?;
            goal_is(r, &g2)?;
            if !multiset_eq(&union(&l.conclusion.delta, &r.conclusion.delta), &s.delta) {
                return Err("premise bounded contexts do not partition the conclusion's".into());
            }
            Ok(())
        }
        Rule::OplusR1 | Rule::OplusR2 => {
            arity(p, 1)?;
            let View::Oplus(g1, g2) = goal_view else { return Err("oplusR on a non-+ goal".into()) };
            let q = &p.premises[0];
            same_gamma(p, q)?;
            delta_is(q, &s.delta, "oplusR premise")?;
            goal_is(q, if p.rule == Rule::OplusR1 { &g1 } else { &g2 })
        }
        Rule::LolliR => {
            arity(p, 1)?;
            let View::Lolli(g1, g2) = goal_view else { return Err("lolliR on a non--o goal".into()) };
            let q = &p.premises[0];
            same_gamma(p, q)?;
            delta_is(q, &plus(&s.delta, &g1), "lolliR premise")?;
            goal_is(q, &g2)
        }
        Rule::ImpR => {
            arity(p, 1)?;
            let View::Imp(g1, g2) = goal_view else { return Err("impR on a non-=> goal".into()) };
            let q = &p.premises[0];
            if !set_eq(&q.conclusion.gamma, &plus(&s.gamma, &g1)) {
                return Err("impR premise must add the hypothesis to the unbounded context".into());
            }
            delta_is(q, &s.delta, "impR premise")?;
            goal_is(q, &g2)
        }
        Rule::BangR => {
            arity(p, 1)?;
            let View::Bang(g) = goal_view else { return Err("bangR on a non-! goal".into()) };
            if !s.delta.is_empty() {
                return Err("bangR with nonempty bounded context".into());
            }
            let q = &p.premises[0];
            same_gamma(p, q)?;
            delta_is(q, &[], "bangR premise")?;
            goal_is(q, &g)
        }
        Rule::ForallR => {
            arity(p, 1)?;
            let View::Forall(qf) = goal_view else { return Err("forallR on a non-all goal".into()) };
            let c = witness(p)?;
            if !matches!(c.node(), Node::Eigen(_) | Node::Const(_) | Node::Free(_)) {
                return Err(format!("eigenvariable `{c}` is not a constant"));
            }
            check_witness_type(c, &qf.ty)?;
            let occurs = s.gamma.iter().chain(&s.delta).chain([&s.goal]).any(|f| f.term().mentions(c));
            if occurs {
                return Err(format!("eigenvariable `{c}` occurs in the conclusion"));
            }
            let q = &p.premises[0];
            same_gamma(p, q)?;
            delta_is(q, &s.delta, "forallR premise")?;
            goal_is(q, &qf.instantiate(c))
        }
        Rule::ExistsR => {
            arity(p, 1)?;
            let View::Exists(qf) = goal_view else { return Err("existsR on a non-ex goal".into()) };
            let t = witness(p)?;
            check_witness_type(t, &qf.ty)?;
            let inst = qf.instantiate(t);
            if !inst.is_goal() {
                return Err(format!("instance `{inst}` is not a goal formula"));
            }
            let q = &p.premises[0];
            same_gamma(p, q)?;
            delta_is(q, &s.delta, "existsR premise")?;
            goal_is(q, &inst)
        }
        Rule::Absorb | Rule::WithL1 | Rule::WithL2 | Rule::LolliL | Rule::ImpL | Rule::ForallL
            if system == System::Reduced =>
        {
            Err("left rules are not part of the backchaining system".into())
        }
        Rule::BCu | Rule::BCb if system == System::Full => Err("backchaining is not a rule of the full calculus".into()),
        Rule::Absorb => {
            arity(p, 1)?;
            let (_, b) = principal_gamma(p)?;
            let q = &p.premises[0];
            same_gamma(p, q)?;
            same_goal(p, q)?;
            delta_is(q, &plus(&s.delta, &b), "absorb premise")
        }
        Rule::WithL1 | Rule::WithL2 => {
            arity(p, 1)?;
            let (i, f) = principal_delta(p)?;
            let View::With(b1, b2) = f.view() else { return Err(format!("`{f}` is not a & formula")) };
            let bi = if p.rule == Rule::WithL1 { b1 } else { b2 };
            let q = &p.premises[0];
            same_gamma(p, q)?;
            same_goal(p, q)?;
            delta_is(q, &plus(&without(&s.delta, i), &bi), "withL premise")
        }
        Rule::ForallL => {
            arity(p, 1)?;
            let (i, f) = principal_delta(p)?;
            let View::Forall(qf) = f.view() else { return Err(format!("`{f}` is not a universal formula")) };
            let t = witness(p)?;
            check_witness_type(t, &qf.ty)?;
            let inst = qf.instantiate(t);
            if !inst.is_clause() {
                return Err(format!("instance `{inst}` is not a program clause"));
            }
            let q = &p.premises[0];
            same_gamma(p, q)?;
            same_goal(p, q)?;
            delta_is(q, &plus(&without(&s.delta, i), &inst), "forallL premise")
        }
        Rule::LolliL => {
            arity(p, 2)?;
            let (i, f) = principal_delta(p)?;
            let View::Lolli(b1, b2) = f.view() else { return Err(format!("`{f}` is not a -o formula")) };
            let (l, r) = (&p.premises[0], &p.premises[1]);
            same_gamma(p, l)?;
            same_gamma(p, r)?;
            goal_is(l, &b1)?;
            same_goal(p, r)?;
            let rest_r = remove_one(&r.conclusion.delta, &b2)
                .ok_or_else(|| format!("right premise lacks `{b2}` in its bounded context"))?;
            if !multiset_eq(&union(&l.conclusion.delta, &rest_r), &without(&s.delta, i)) {
                return Err("premise bounded contexts do not partition the conclusion's".into());
            }
            Ok(())
        }
        Rule::ImpL => {
            arity(p, 2)?;
            let (i, f) = principal_delta(p)?;
            let View::Imp(b1, b2) = f.view() else { return Err(format!("`{f}` is not a => formula")) };
            let (l, r) = (&p.premises[0], &p.premises[1]);
            same_gamma(p, l)?;
            same_gamma(p, r)?;
            goal_is(l, &b1)?;
            delta_is(l, &[], "impL left premise")?;
            same_goal(p, r)?;
            delta_is(r, &plus(&without(&s.delta, i), &b2), "impL right premise")
        }
        Rule::BCu | Rule::BCb => check_bc(p, fresh),
    }
}

fn check_bc(p: &ProofTree, fresh: &mut u32) -> NodeResult {
    let s = &p.conclusion;
    let (b, rest) = if p.rule == Rule::BCu {
        let (_, b) = principal_gamma(p)?;
        (b, s.delta.clone())
    } else {
        let (i, b) = principal_delta(p)?;
        (b, without(&s.delta, i))
    };
    let triple = p.triple.as_ref().ok_or("missing clause triple")?;
    if triple.head != s.goal {
        return Err(format!("triple head `{}` differs from goal `{}`", triple.head, s.goal));
    }
    if !s.goal.is_rigid_atom() {
        return Err("backchaining on a goal that is not a rigid atom".into());
    }
    if !triple_member(&b, triple, fresh) {
        return Err(format!("triple ⟨{triple}⟩ is not in the elaboration of `{b}`"));
    }
    let (n, m) = (triple.unbounded.len(), triple.bounded.len());
    arity(p, n + m)?;
    let mut used = Vec::new();
    for (j, q) in p.premises.iter().enumerate() {
        same_gamma(p, q)?;
        if j < n {
            goal_is(q, &triple.unbounded[j])?;
            delta_is(q, &[], "unbounded obligation")?;
        } else {
            goal_is(q, &triple.bounded[j - n])?;
            used.extend(q.conclusion.delta.iter().cloned());
        }
    }
    if !multiset_eq(&used, &rest) {
        return Err("obligation bounded contexts do not partition the remaining context".into());
    }
    Ok(())
}

/// Does `triple` instantiate some element of the elaboration of `clause`?
pub(crate) fn triple_member(clause: &Formula, triple: &ClauseTriple, fresh: &mut u32) -> bool {
    let base = *fresh;
    let mut gen = |ty: &crate::term::SimpleType| {
        let t = Term::meta(MetaVar { id: *fresh, ty: ty.clone() });
        *fresh += 1;
        t
    };
    let candidates = elaborate(clause, Some(&triple.head), &mut gen);
    candidates.iter().any(|e| triple_matches(&e.triple, triple, base).is_some())
}

/// One-way match of an elaborated `pattern` (metavariables numbered from
/// `base`) against `target`.
pub(crate) fn triple_matches(
    pattern: &ClauseTriple,
    target: &ClauseTriple,
    base: u32,
) -> Option<std::collections::HashMap<u32, Term>> {
    if pattern.unbounded.len() != target.unbounded.len() || pattern.bounded.len() != target.bounded.len() {
        return None;
    }
    let mut s = std::collections::HashMap::new();
    let pairs = pattern
        .unbounded
        .iter()
        .zip(&target.unbounded)
        .chain(pattern.bounded.iter().zip(&target.bounded))
        .chain([(&pattern.head, &target.head)]);
    for (p, t) in pairs {
        if !match_term(p.term(), t.term(), base, &mut s) {
            return None;
        }
    }
    Some(s)
}

pub(crate) fn match_term(p: &Term, t: &Term, base: u32, s: &mut std::collections::HashMap<u32, Term>) -> bool {
    match (p.node(), t.node()) {
        (Node::Meta(m), _) if m.id >= base => match s.get(&m.id) {
            Some(v) => v == t,
            None => {
                if !t.is_closed() {
                    return false;
                }
                s.insert(m.id, t.clone());
                true
            }
        },
        (Node::App(f, x), Node::Nat(n)) if f.as_const().is_some_and(|c| &*c.name == "s") => {
            *n > 0 && match_term(x, &Term::nat(n - 1), base, s)
        }
        (Node::App(f1, a1), Node::App(f2, a2)) => match_term(f1, f2, base, s) && match_term(a1, a2, base, s),
        (Node::Lam(t1, _, b1), Node::Lam(t2, _, b2)) => t1 == t2 && match_term(b1, b2, base, s),
        _ => p == t,
    }
}

#[cfg(test)]
mod tests;
