//! Proof normalization: uniform, simple and coincided proofs, and the
//! collapse of coincided proofs into backchaining proofs.
//!
//! All three permutation stages share one operation: a left rule (or an
//! `absorb`) is detached from the tree and pushed upwards through the rules
//! above it, following the formula it produces, until it reaches a node
//! where it may stay.
//!
//! * uniform: stop at the first sequent with an atomic goal;
//! * simple and coincided: stop at the `id` or left rule acting on the
//!   produced formula.
//!
//! Offenders are treated innermost first: the first offending node in
//! post-order, premises left to right.

use std::fmt;

use thiserror::Error;

use crate::formula::{ClauseTriple, Formula, View};
use crate::kernel::{
    check_full, compute_marking, format_path, is_coincided, is_offender, is_simple, is_uniform, left_product,
    main_premise, ProofTree, Rule, Sequent, Violation,
};
use crate::term::{Eigen, Node, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Uniform,
    Simple,
    Coincided,
    Reduced,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Uniform => "uniform",
            Stage::Simple => "simple",
            Stage::Coincided => "coincided",
            Stage::Reduced => "reduced",
        }
    }

    pub fn from_name(s: &str) -> Option<Stage> {
        [Stage::Uniform, Stage::Simple, Stage::Coincided, Stage::Reduced].into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("input is not a valid proof: {0}")]
    Invalid(#[from] Violation),
    #[error("input is not {0}")]
    Precondition(&'static str),
    #[error("cannot permute at {path}: {reason}")]
    Stuck { path: String, reason: String },
}

/// A transformed proof and the permutations applied, one `scheme@path` line
/// per step.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub proof: ProofTree,
    pub trace: Vec<String>,
}

/// Run the stages up to `target` on a full-calculus proof.
pub fn normalize(p: &ProofTree, target: Stage) -> Result<Normalized, NormalizeError> {
    check_full(p)?;
    let mut trace = Vec::new();
    let mut cur = to_uniform(p)?;
    trace.append(&mut cur.trace);
    if target >= Stage::Simple {
        let mut next = to_simple(&cur.proof)?;
        trace.append(&mut next.trace);
        cur = next;
    }
    if target >= Stage::Coincided {
        let mut next = to_coincided(&cur.proof)?;
        trace.append(&mut next.trace);
        cur = next;
    }
    if target == Stage::Reduced {
        cur.proof = to_reduced(&cur.proof)?;
    }
    Ok(Normalized { proof: cur.proof, trace })
}

pub fn to_uniform(p: &ProofTree) -> Result<Normalized, NormalizeError> {
    to_uniform_observed(p, &mut |_| {})
}

/// [`to_uniform`], calling `observe` on the proof after each offending node
/// has been pushed up to atomic goals.
pub fn to_uniform_observed(
    p: &ProofTree,
    observe: &mut dyn FnMut(&ProofTree),
) -> Result<Normalized, NormalizeError> {
    let mut sinker = Sinker::new(p, Mode::Uniform);
    let mut proof = p.clone();
    while let Some(path) = first_post_order(&proof, &mut |t| is_offender(t)) {
        proof = sinker.eliminate(proof, &path)?;
        observe(&proof);
    }
    Ok(Normalized { proof, trace: sinker.trace })
}

pub fn to_simple(p: &ProofTree) -> Result<Normalized, NormalizeError> {
    if !is_uniform(p) {
        return Err(NormalizeError::Precondition("uniform"));
    }
    let mut sinker = Sinker::new(p, Mode::Simple);
    let mut proof = p.clone();
    loop {
        let marking = compute_marking(&proof);
        let next = first_post_order_with_path(&proof, &mut |path, t| {
            t.rule.is_left() && marking.at(path).and_then(|m| m.mark).is_none()
        });
        let Some(path) = next else { break };
        proof = sinker.eliminate(proof, &path)?;
    }
    Ok(Normalized { proof, trace: sinker.trace })
}

pub fn to_coincided(p: &ProofTree) -> Result<Normalized, NormalizeError> {
    if !is_simple(p) {
        return Err(NormalizeError::Precondition("simple"));
    }
    let mut sinker = Sinker::new(p, Mode::Coincided);
    let mut proof = p.clone();
    while let Some(path) = first_post_order(&proof, &mut |t| t.rule == Rule::Absorb && !absorb_coincides(t)) {
        proof = sinker.eliminate(proof, &path)?;
    }
    Ok(Normalized { proof, trace: sinker.trace })
}

fn absorb_coincides(t: &ProofTree) -> bool {
    let (Some(copy), Some(q)) = (t.principal_formula(), t.premises.first()) else { return false };
    (q.rule.is_left() || q.rule == Rule::Id) && q.principal_formula() == Some(copy)
}

fn first_post_order(p: &ProofTree, pred: &mut dyn FnMut(&ProofTree) -> bool) -> Option<Vec<usize>> {
    first_post_order_with_path(p, &mut |_, t| pred(t))
}

fn first_post_order_with_path(
    p: &ProofTree,
    pred: &mut dyn FnMut(&[usize], &ProofTree) -> bool,
) -> Option<Vec<usize>> {
    fn go(t: &ProofTree, path: &mut Vec<usize>, pred: &mut dyn FnMut(&[usize], &ProofTree) -> bool) -> bool {
        for (i, q) in t.premises.iter().enumerate() {
            path.push(i);
            if go(q, path, pred) {
                return true;
            }
            path.pop();
        }
        pred(path, t)
    }
    let mut path = Vec::new();
    go(p, &mut path, pred).then_some(path)
}

// ---------------------------------------------------------------------------
// Pushing a rule upwards

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mode {
    Uniform,
    Simple,
    Coincided,
}

/// A detached left rule or `absorb`.
#[derive(Clone)]
struct Lift {
    rule: Rule,
    /// Principal formula; a Γ member for `absorb`.
    formula: Formula,
    /// The formula it places in its main premise.
    product: Formula,
    witness: Option<Term>,
    side: Option<ProofTree>,
}

impl Lift {
    fn side_delta(&self) -> &[Formula] {
        self.side.as_ref().map_or(&[], |s| &s.conclusion.delta)
    }
}

struct Sinker {
    mode: Mode,
    next_eigen: u32,
    trace: Vec<String>,
}

impl Sinker {
    fn new(p: &ProofTree, mode: Mode) -> Sinker {
        let mut max = 0;
        let mut see = |t: &Term| {
            t.any(&mut |s| {
                if let Node::Eigen(e) = s.node() {
                    max = max.max(e.id);
                }
                false
            });
        };
        p.visit(&mut |_, n| {
            let s = &n.conclusion;
            for f in s.gamma.iter().chain(&s.delta).chain([&s.goal]) {
                see(f.term());
            }
            if let Some(w) = &n.witness {
                see(w);
            }
        });
        Sinker { mode, next_eigen: max + 1, trace: Vec::new() }
    }

    fn fresh_eigen(&mut self, like: &Term) -> Term {
        let ty = match like.node() {
            Node::Eigen(e) => e.ty.clone(),
            Node::Const(c) => c.ty.clone(),
            Node::Free(v) => v.ty.clone(),
            _ => unreachable!("eigenvariables are atomic"),
        };
        let e = Term::eigen(Eigen { id: self.next_eigen, ty });
        self.next_eigen += 1;
        e
    }

    /// Detach the node at `path` and push it up.
    fn eliminate(&mut self, mut proof: ProofTree, path: &[usize]) -> Result<ProofTree, NormalizeError> {
        let node = take_at(&mut proof, path);
        let lowered = self.detach_and_sink(node, path)?;
        put_at(&mut proof, path, lowered);
        Ok(proof)
    }

    fn detach_and_sink(&mut self, mut node: ProofTree, path: &[usize]) -> Result<ProofTree, NormalizeError> {
        let stuck = |reason: &str| NormalizeError::Stuck { path: format_path(path), reason: reason.to_string() };
        let formula = node.principal_formula().cloned().ok_or_else(|| stuck("missing principal"))?;
        let product = match node.rule {
            Rule::Absorb => formula.clone(),
            _ => left_product(&node).ok_or_else(|| stuck("not a left rule"))?,
        };
        let mut premises = std::mem::take(&mut node.premises);
        let main = premises.pop().ok_or_else(|| stuck("missing premise"))?;
        let side = premises.pop();
        let lift = Lift { rule: node.rule, formula, product, witness: node.witness.take(), side };
        let mut p = path.to_vec();
        self.sink(&lift, main, false, &mut p)
    }

    /// Place `lift` on `m` or push it into `m`'s premises. Returns a proof of
    /// `m`'s conclusion with the lift's product replaced by its principal
    /// and side context.
    fn sink(
        &mut self,
        lift: &Lift,
        m: ProofTree,
        parent_produces: bool,
        path: &mut Vec<usize>,
    ) -> Result<ProofTree, NormalizeError> {
        if self.stops_at(lift, &m, parent_produces) {
            return Ok(place(lift, m));
        }
        let scheme = format!("{}/{}@{}", lift.rule, m.rule, format_path(path));
        self.trace.push(scheme);
        let mut m = m;
        let delta_principal = delta_principal(&m);
        let (conclusion, remap) = lifted_sequent(lift, &m.conclusion, delta_principal);
        if let (Some(i), true) = (m.principal, delta_principal.is_some()) {
            m.principal = Some(remap(i));
        }
        match m.rule {
            Rule::TopR => {
                m.conclusion = conclusion;
                return Ok(m);
            }
            Rule::WithR => {
                let premises = std::mem::take(&mut m.premises);
                let mut out = Vec::new();
                for (k, q) in premises.into_iter().enumerate() {
                    path.push(k);
                    out.push(self.sink(lift, q, false, path)?);
                    path.pop();
                }
                m.premises = out;
                m.conclusion = conclusion;
                return Ok(m);
            }
            _ => {}
        }
        let k = (0..m.premises.len())
            .find(|&k| inherited(&m, k).contains(&lift.product))
            .ok_or_else(|| NormalizeError::Stuck {
                path: format_path(path),
                reason: format!("`{}` is not passed to any premise of {}", lift.product, m.rule),
            })?;
        let produces = produces_into(&m, k, &lift.product);
        if m.rule == Rule::ForallR {
            self.freshen_eigen(lift, &mut m);
        }
        let mut lift = lift.clone();
        if m.rule == Rule::ImpR {
            if let View::Imp(g1, _) = m.conclusion.goal.view() {
                if let Some(side) = lift.side.take() {
                    lift.side = Some(self.weaken(side, &g1));
                }
            }
        }
        let q = std::mem::replace(&mut m.premises[k], placeholder());
        path.push(k);
        m.premises[k] = self.sink(&lift, q, produces, path)?;
        path.pop();
        m.conclusion = conclusion;
        Ok(m)
    }

    fn stops_at(&self, lift: &Lift, m: &ProofTree, parent_produces: bool) -> bool {
        match self.mode {
            Mode::Uniform => matches!(m.goal().view(), View::Atom { .. } | View::Builtin(..)),
            Mode::Simple | Mode::Coincided => {
                m.rule == Rule::Id
                    || (m.rule.is_left() && !parent_produces && m.principal_formula() == Some(&lift.product))
            }
        }
    }

    /// Rename the eigenvariable of a `forallR` node if it clashes with what
    /// the lift brings into its conclusion.
    fn freshen_eigen(&mut self, lift: &Lift, m: &mut ProofTree) {
        let Some(c) = m.witness.clone() else { return };
        let clash = std::iter::once(&lift.formula).chain(lift.side_delta()).any(|f| f.term().mentions(&c));
        if !clash {
            return;
        }
        let fresh = self.fresh_eigen(&c);
        let premise = std::mem::replace(&mut m.premises[0], placeholder());
        m.premises[0] = rename(&premise, &c, &fresh);
        m.witness = Some(fresh);
    }

    /// Add `g` to the unbounded context of every sequent of `t`.
    fn weaken(&mut self, mut t: ProofTree, g: &Formula) -> ProofTree {
        if t.rule == Rule::ForallR {
            if let Some(c) = t.witness.clone() {
                if g.term().mentions(&c) {
                    let fresh = self.fresh_eigen(&c);
                    let premise = std::mem::replace(&mut t.premises[0], placeholder());
                    t.premises[0] = rename(&premise, &c, &fresh);
                    t.witness = Some(fresh);
                }
            }
        }
        if !t.conclusion.gamma.contains(g) {
            t.conclusion.gamma.push(g.clone());
        }
        let premises = std::mem::take(&mut t.premises);
        t.premises = premises.into_iter().map(|q| self.weaken(q, g)).collect();
        t
    }
}

fn placeholder() -> ProofTree {
    ProofTree::new(Rule::TopR, Sequent::new(vec![], vec![], Formula::top()), vec![])
}

/// Δ position of `m`'s principal, for rules whose principal lives in Δ.
fn delta_principal(m: &ProofTree) -> Option<usize> {
    match m.rule {
        Rule::Id | Rule::BCb => m.principal,
        r if r.is_left() => m.principal,
        _ => None,
    }
}

/// Put the lift on top of `m`.
fn place(lift: &Lift, m: ProofTree) -> ProofTree {
    // The copy `m` acts on is the one the lift produces.
    let (conclusion, _) = lifted_sequent(lift, &m.conclusion, None);
    let principal = match lift.rule {
        Rule::Absorb => conclusion.gamma.iter().position(|f| *f == lift.formula),
        _ => product_slot(&m.conclusion.delta, &lift.product, None),
    };
    let premises = match &lift.side {
        Some(side) => vec![side.clone(), m],
        None => vec![m],
    };
    let mut node = ProofTree::new(lift.rule, conclusion, premises);
    node.principal = principal;
    node.witness = lift.witness.clone();
    node
}

/// Position of a copy of `product` in `delta` other than `avoid`.
fn product_slot(delta: &[Formula], product: &Formula, avoid: Option<usize>) -> Option<usize> {
    delta.iter().enumerate().position(|(i, f)| Some(i) != avoid && f == product)
}

/// The conclusion the lift would have on top of a sequent, and how Δ
/// positions of that sequent move.
fn lifted_sequent(lift: &Lift, s: &Sequent, avoid: Option<usize>) -> (Sequent, Box<dyn Fn(usize) -> usize>) {
    let mut delta = s.delta.clone();
    let Some(j) = product_slot(&delta, &lift.product, avoid) else {
        return (s.clone(), Box::new(|i| i));
    };
    let remap: Box<dyn Fn(usize) -> usize> = if lift.rule == Rule::Absorb {
        delta.remove(j);
        Box::new(move |i| if i > j { i - 1 } else { i })
    } else {
        delta[j] = lift.formula.clone();
        delta.extend(lift.side_delta().iter().cloned());
        Box::new(|i| i)
    };
    (Sequent::new(s.gamma.clone(), delta, s.goal.clone()), remap)
}

/// Premise `k`'s Δ without what `m` itself adds to it.
fn inherited(m: &ProofTree, k: usize) -> Vec<Formula> {
    let q = &m.premises[k].conclusion.delta;
    let added: Vec<Formula> = match (m.rule, m.conclusion.goal.view()) {
        (Rule::LolliR, View::Lolli(g1, _)) => vec![g1],
        (Rule::Absorb, _) => m.principal_formula().cloned().into_iter().collect(),
        (r, _) if r.is_left() && k == main_premise(r) => {
            left_product(m).into_iter().collect()
        }
        _ => vec![],
    };
    let mut v = q.clone();
    for a in added {
        if let Some(i) = v.iter().position(|f| *f == a) {
            v.remove(i);
        }
    }
    v
}

/// Does `m` itself put a copy of `product` into premise `k`?
fn produces_into(m: &ProofTree, k: usize, product: &Formula) -> bool {
    match m.rule {
        Rule::Absorb => m.principal_formula() == Some(product),
        r if r.is_left() && k == main_premise(r) => {
            left_product(m).as_ref() == Some(product)
        }
        _ => false,
    }
}

fn rename(t: &ProofTree, from: &Term, to: &Term) -> ProofTree {
    let mut f = |x: &Term| x.map_leaves(&mut |s| (s == from).then(|| to.clone()));
    let mut g = |x: &Formula| Formula::from_term(f(x.term()));
    let s = &t.conclusion;
    let conclusion =
        Sequent::new(s.gamma.iter().map(&mut g).collect(), s.delta.iter().map(&mut g).collect(), g(&s.goal));
    let mut out = ProofTree::new(t.rule, conclusion, t.premises.iter().map(|q| rename(q, from, to)).collect());
    out.principal = t.principal;
    out.witness = t.witness.as_ref().map(&mut f);
    out.triple = t.triple.as_ref().map(|tr| tr.map_terms(&mut f));
    out
}

fn take_at(p: &mut ProofTree, path: &[usize]) -> ProofTree {
    let slot = at_mut(p, path);
    std::mem::replace(slot, placeholder())
}

fn put_at(p: &mut ProofTree, path: &[usize], t: ProofTree) {
    *at_mut(p, path) = t;
}

fn at_mut<'a>(p: &'a mut ProofTree, path: &[usize]) -> &'a mut ProofTree {
    let mut cur = p;
    for &i in path {
        cur = &mut cur.premises[i];
    }
    cur
}

// ---------------------------------------------------------------------------
// Collapsing into backchaining

/// Replace every run `absorb? left* id` of a coincided proof by one `BCu`
/// (run starts with `absorb`) or `BCb` node. Side premises of the run become
/// the node's obligations, unbounded ones first.
pub fn to_reduced(p: &ProofTree) -> Result<ProofTree, NormalizeError> {
    let mut bc = false;
    p.visit(&mut |_, t| bc |= t.rule.is_bc());
    if bc || !is_coincided(p) {
        return Err(NormalizeError::Precondition("coincided"));
    }
    let mut path = Vec::new();
    collapse(p, &mut path)
}

fn collapse(t: &ProofTree, path: &mut Vec<usize>) -> Result<ProofTree, NormalizeError> {
    let starts_run = t.rule == Rule::Absorb || t.rule == Rule::Id || t.rule.is_left();
    if !starts_run {
        let mut out = ProofTree::new(t.rule, t.conclusion.clone(), Vec::new());
        out.principal = t.principal;
        out.witness = t.witness.clone();
        out.triple = t.triple.clone();
        for (i, q) in t.premises.iter().enumerate() {
            path.push(i);
            out.premises.push(collapse(q, path)?);
            path.pop();
        }
        return Ok(out);
    }
    let stuck = |path: &[usize], reason: &str| NormalizeError::Stuck {
        path: format_path(path),
        reason: reason.to_string(),
    };
    let (rule, principal) = if t.rule == Rule::Absorb { (Rule::BCu, t.principal) } else { (Rule::BCb, t.principal) };
    let mut unbounded = Vec::new();
    let mut bounded = Vec::new();
    let mut obligations_u = Vec::new();
    let mut obligations_b = Vec::new();
    let mut cur = t;
    let mut here = path.clone();
    if cur.rule == Rule::Absorb {
        cur = &cur.premises[0];
        here.push(0);
    }
    loop {
        match cur.rule {
            Rule::Id => break,
            Rule::WithL1 | Rule::WithL2 | Rule::ForallL => {
                cur = &cur.premises[0];
                here.push(0);
            }
            Rule::LolliL | Rule::ImpL => {
                let side = &cur.premises[0];
                here.push(0);
                let reduced = collapse(side, &mut here)?;
                here.pop();
                if cur.rule == Rule::LolliL {
                    bounded.push(side.conclusion.goal.clone());
                    obligations_b.push(reduced);
                } else {
                    unbounded.push(side.conclusion.goal.clone());
                    obligations_u.push(reduced);
                }
                cur = &cur.premises[1];
                here.push(1);
            }
            _ => return Err(stuck(&here, "run of left rules does not end in id")),
        }
    }
    let triple = ClauseTriple { unbounded, bounded, head: cur.conclusion.goal.clone() };
    obligations_u.extend(obligations_b);
    let mut out = ProofTree::new(rule, t.conclusion.clone(), obligations_u);
    out.principal = principal;
    out.triple = Some(triple);
    Ok(out)
}

#[cfg(test)]
mod tests;
