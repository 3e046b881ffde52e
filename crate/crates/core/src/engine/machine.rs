//! The search machine.
//!
//! Pending work is a persistent list of instructions, so a choicepoint only
//! has to keep a pointer to it. Everything else that changes destructively
//! (resource flags, the resource stack, proof nodes) is undone through a
//! trail.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::builtins::solve_builtin;
use super::unify::Substitution;
use super::{BcEvent, ClauseRef, EngineError, Outcome, Proved, SearchConfig};
use crate::formula::{clause_heads, elaborate, head_compatible, head_may_match, ClauseTriple, Elaborated, Formula, Step, View};
use crate::kernel::{ProofTree, Rule, Sequent};
use crate::term::{Eigen, MetaVar, Term};

#[derive(Clone)]
enum Instr {
    Solve(Formula, usize),
    /// Solve with no access to the resources present now.
    Floor(Formula, usize),
    RestoreFloor { floor: usize, slack: bool },
    /// First conjunct of a `&` done; `before` holds the consumption flags at
    /// its start.
    WithMid { goal: Formula, node: usize, before: Rc<Vec<bool>>, slack: bool },
    WithEnd { first: Rc<Vec<usize>>, slack1: bool, before: Rc<Vec<bool>>, slack: bool },
    EndLolli { slack: bool },
    EndImp(Rc<Vec<Formula>>),
}

struct Cont {
    instr: Instr,
    next: Option<Rc<Cont>>,
}

impl Drop for Cont {
    fn drop(&mut self) {
        let mut next = self.next.take();
        while let Some(rc) = next {
            match Rc::try_unwrap(rc) {
                Ok(mut c) => next = c.next.take(),
                Err(_) => break,
            }
        }
    }
}

#[derive(Clone)]
struct Regs {
    cont: Option<Rc<Cont>>,
    /// Some `top` in the current scope can absorb leftover resources.
    slack: bool,
    gamma: Rc<Vec<Formula>>,
    /// Resources below this position are out of reach.
    floor: usize,
    next_var: u32,
}

struct Slot {
    id: usize,
    formula: Formula,
    consumed: bool,
}

enum Undo {
    Push,
    Pop(Slot),
    Consume(usize),
    Unconsume(usize),
    Node(usize),
}

#[derive(Clone)]
enum Kind {
    Pending,
    Top,
    Builtin,
    Bang,
    With,
    Lolli(usize),
    Imp,
    Tensor,
    Oplus(u8),
    Forall(Term),
    Exists(Term),
    Bc { clause: ClauseRef, elab: Rc<Elaborated> },
}

struct NodeRec {
    goal: Formula,
    gamma: Rc<Vec<Formula>>,
    kind: Kind,
    children: Vec<usize>,
}

struct Candidate {
    clause: ClauseRef,
    /// Stack position of a bounded clause.
    pos: Option<usize>,
    elab: Rc<Elaborated>,
}

enum Alt {
    Oplus { goal: Formula, node: usize },
    Atom { goal: Formula, node: usize, cands: Rc<Vec<Candidate>>, next: usize },
}

struct Snapshot {
    regs: Regs,
    subst: usize,
    trail: usize,
    nodes: usize,
}

struct Choice {
    at: Snapshot,
    alt: Alt,
}

enum Flow {
    Go,
    Fail,
}

enum Halt {
    Budget,
    Error(EngineError),
}

impl From<EngineError> for Halt {
    fn from(e: EngineError) -> Self {
        Halt::Error(e)
    }
}

pub(super) struct Machine {
    regs: Regs,
    subst: Substitution,
    slots: Vec<Slot>,
    slot_formulas: Vec<Formula>,
    initial: usize,
    trail: Vec<Undo>,
    nodes: Vec<NodeRec>,
    choices: Vec<Choice>,
    steps: u64,
    budget: u64,
    /// Head skeletons of each unbounded context, keyed by address; the `Rc`
    /// is kept so the address stays valid. `None` marks clauses with
    /// metavariables, which are checked after resolution instead.
    heads: HashMap<*const Vec<Formula>, (Rc<Vec<Formula>>, Rc<Vec<Option<Vec<Formula>>>>)>,
}

impl Machine {
    pub(super) fn new(gamma: &[Formula], delta: &[Formula], goal: &Formula, cfg: &SearchConfig) -> Machine {
        let mut next_var = 0;
        for f in gamma.iter().chain(delta).chain([goal]) {
            f.term().any(&mut |t| {
                match t.node() {
                    crate::term::Node::Meta(m) => next_var = next_var.max(m.id + 1),
                    crate::term::Node::Eigen(e) => next_var = next_var.max(e.id + 1),
                    _ => {}
                }
                false
            });
        }
        let gamma = Rc::new(gamma.to_vec());
        let slots = delta
            .iter()
            .enumerate()
            .map(|(id, f)| Slot { id, formula: f.clone(), consumed: false })
            .collect();
        let mut m = Machine {
            regs: Regs { cont: None, slack: false, gamma: gamma.clone(), floor: 0, next_var },
            subst: Substitution::new(),
            slots,
            slot_formulas: delta.to_vec(),
            initial: delta.len(),
            trail: Vec::new(),
            nodes: Vec::new(),
            choices: Vec::new(),
            steps: 0,
            budget: cfg.budget,
            heads: HashMap::new(),
        };
        let root = m.alloc(goal.clone());
        m.push(Instr::Solve(goal.clone(), root));
        m
    }

    pub(super) fn run(mut self) -> Result<Outcome, EngineError> {
        loop {
            let flow = match self.step() {
                Ok(Some(flow)) => flow,
                Ok(None) => return Ok(Outcome::Proved(Box::new(self.build()))),
                Err(Halt::Budget) => return Ok(Outcome::BudgetExhausted { steps: self.steps }),
                Err(Halt::Error(e)) => return Err(e),
            };
            if let Flow::Fail = flow {
                match self.backtrack() {
                    Ok(true) => {}
                    Ok(false) => return Ok(Outcome::Unprovable { steps: self.steps }),
                    Err(Halt::Budget) => return Ok(Outcome::BudgetExhausted { steps: self.steps }),
                    Err(Halt::Error(e)) => return Err(e),
                }
            }
        }
    }

    fn push(&mut self, i: Instr) {
        self.regs.cont = Some(Rc::new(Cont { instr: i, next: self.regs.cont.take() }));
    }

    fn pop(&mut self) -> Option<Instr> {
        let c = self.regs.cont.take()?;
        let i = c.instr.clone();
        self.regs.cont = c.next.clone();
        Some(i)
    }

    fn alloc(&mut self, goal: Formula) -> usize {
        self.nodes.push(NodeRec { goal, gamma: self.regs.gamma.clone(), kind: Kind::Pending, children: Vec::new() });
        self.nodes.len() - 1
    }

    fn set(&mut self, n: usize, kind: Kind, children: Vec<usize>) {
        let node = &mut self.nodes[n];
        node.kind = kind;
        node.children = children;
        self.trail.push(Undo::Node(n));
    }

    fn fresh(&mut self) -> u32 {
        let v = self.regs.next_var;
        self.regs.next_var += 1;
        v
    }

    fn consume(&mut self, pos: usize) {
        self.slots[pos].consumed = true;
        self.trail.push(Undo::Consume(pos));
    }

    fn unconsume(&mut self, pos: usize) {
        self.slots[pos].consumed = false;
        self.trail.push(Undo::Unconsume(pos));
    }

    fn flags(&self) -> Vec<bool> {
        self.slots.iter().map(|s| s.consumed).collect()
    }

    /// Positions consumed now that were free in `before`.
    fn consumed_since(&self, before: &[bool]) -> Vec<usize> {
        (0..before.len()).filter(|&p| self.slots[p].consumed && !before[p]).collect()
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot { regs: self.regs.clone(), subst: self.subst.mark(), trail: self.trail.len(), nodes: self.nodes.len() }
    }

    fn restore(&mut self, at: Snapshot) {
        self.subst.undo_to(at.subst);
        while self.trail.len() > at.trail {
            match self.trail.pop().expect("trail entry") {
                Undo::Push => {
                    self.slots.pop();
                }
                Undo::Pop(slot) => self.slots.push(slot),
                Undo::Consume(p) => self.slots[p].consumed = false,
                Undo::Unconsume(p) => self.slots[p].consumed = true,
                Undo::Node(n) => {
                    if let Some(node) = self.nodes.get_mut(n) {
                        node.kind = Kind::Pending;
                        node.children.clear();
                    }
                }
            }
        }
        self.nodes.truncate(at.nodes);
        self.regs = at.regs;
    }

    fn backtrack(&mut self) -> Result<bool, Halt> {
        while let Some(Choice { at, alt }) = self.choices.pop() {
            self.restore(at);
            let flow = match alt {
                Alt::Oplus { goal, node } => {
                    let c = self.alloc(goal.clone());
                    self.set(node, Kind::Oplus(2), vec![c]);
                    self.push(Instr::Solve(goal, c));
                    Flow::Go
                }
                Alt::Atom { goal, node, cands, next } => self.try_candidates(goal, node, cands, next)?,
            };
            if let Flow::Go = flow {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Execute one instruction; `None` once the proof is complete.
    fn step(&mut self) -> Result<Option<Flow>, Halt> {
        let instr = match self.pop() {
            Some(i) => i,
            None => {
                let ok = self.regs.slack || self.slots.iter().all(|s| s.consumed);
                return Ok(if ok { None } else { Some(Flow::Fail) });
            }
        };
        let flow = match instr {
            Instr::Solve(goal, n) => self.solve(goal, n)?,
            Instr::Floor(goal, n) => {
                self.push(Instr::RestoreFloor { floor: self.regs.floor, slack: self.regs.slack });
                self.regs.floor = self.slots.len();
                self.regs.slack = false;
                self.push(Instr::Solve(goal, n));
                Flow::Go
            }
            Instr::RestoreFloor { floor, slack } => {
                self.regs.floor = floor;
                self.regs.slack = slack;
                Flow::Go
            }
            Instr::WithMid { goal, node, before, slack } => {
                let first = self.consumed_since(&before);
                for &p in &first {
                    self.unconsume(p);
                }
                let slack1 = self.regs.slack;
                self.regs.slack = false;
                self.push(Instr::WithEnd { first: Rc::new(first), slack1, before, slack });
                self.push(Instr::Solve(goal, node));
                Flow::Go
            }
            Instr::WithEnd { first, slack1, before, slack } => {
                let second = self.consumed_since(&before);
                let slack2 = self.regs.slack;
                let (a, b): (BTreeSet<usize>, BTreeSet<usize>) =
                    (first.iter().copied().collect(), second.iter().copied().collect());
                let ok = match (slack1, slack2) {
                    (false, false) => a == b,
                    (true, false) => a.is_subset(&b),
                    (false, true) => b.is_subset(&a),
                    (true, true) => true,
                };
                if !ok {
                    return Ok(Some(Flow::Fail));
                }
                for &p in a.difference(&b) {
                    self.consume(p);
                }
                self.regs.slack = slack || (slack1 && slack2);
                Flow::Go
            }
            Instr::EndLolli { slack } => {
                let top = self.slots.last().expect("hypothesis slot");
                if !top.consumed && !self.regs.slack {
                    return Ok(Some(Flow::Fail));
                }
                let slot = self.slots.pop().expect("hypothesis slot");
                self.trail.push(Undo::Pop(slot));
                self.regs.slack |= slack;
                Flow::Go
            }
            Instr::EndImp(gamma) => {
                self.regs.gamma = gamma;
                Flow::Go
            }
        };
        Ok(Some(flow))
    }

    fn solve(&mut self, goal: Formula, n: usize) -> Result<Flow, Halt> {
        let goal = Formula::from_term(self.subst.walk(goal.term()));
        self.nodes[n].gamma = self.regs.gamma.clone();
        match goal.view() {
            View::Top => {
                self.set(n, Kind::Top, vec![]);
                self.regs.slack = true;
            }
            View::Bang(g) => {
                let c = self.alloc(g.clone());
                self.set(n, Kind::Bang, vec![c]);
                self.push(Instr::Floor(g, c));
            }
            View::With(a, b) => {
                let (c1, c2) = (self.alloc(a.clone()), self.alloc(b.clone()));
                self.set(n, Kind::With, vec![c1, c2]);
                let before = Rc::new(self.flags());
                self.push(Instr::WithMid { goal: b, node: c2, before, slack: self.regs.slack });
                self.regs.slack = false;
                self.push(Instr::Solve(a, c1));
            }
            View::Lolli(a, b) => {
                let id = self.slot_formulas.len();
                let formula = Formula::from_term(self.subst.resolve(a.term()));
                self.slot_formulas.push(formula.clone());
                self.slots.push(Slot { id, formula, consumed: false });
                self.trail.push(Undo::Push);
                let c = self.alloc(b.clone());
                self.set(n, Kind::Lolli(id), vec![c]);
                self.push(Instr::EndLolli { slack: self.regs.slack });
                self.regs.slack = false;
                self.push(Instr::Solve(b, c));
            }
            View::Imp(a, b) => {
                let old = self.regs.gamma.clone();
                if !old.contains(&a) {
                    let mut g = (*old).clone();
                    g.push(a);
                    self.regs.gamma = Rc::new(g);
                }
                self.push(Instr::EndImp(old));
                let c = self.alloc(b.clone());
                self.set(n, Kind::Imp, vec![c]);
                self.push(Instr::Solve(b, c));
            }
            View::Tensor(a, b) => {
                let (c1, c2) = (self.alloc(a.clone()), self.alloc(b.clone()));
                self.set(n, Kind::Tensor, vec![c1, c2]);
                self.push(Instr::Solve(b, c2));
                self.push(Instr::Solve(a, c1));
            }
            View::Oplus(a, b) => {
                self.choices.push(Choice { at: self.snapshot(), alt: Alt::Oplus { goal: b, node: n } });
                let c = self.alloc(a.clone());
                self.set(n, Kind::Oplus(1), vec![c]);
                self.push(Instr::Solve(a, c));
            }
            View::Forall(q) => {
                let e = Term::eigen(Eigen { id: self.fresh(), ty: q.ty.clone() });
                let body = q.instantiate(&e);
                let c = self.alloc(body.clone());
                self.set(n, Kind::Forall(e), vec![c]);
                self.push(Instr::Solve(body, c));
            }
            View::Exists(q) => {
                let m = Term::meta(MetaVar { id: self.fresh(), ty: q.ty.clone() });
                let body = q.instantiate(&m);
                let c = self.alloc(body.clone());
                self.set(n, Kind::Exists(m), vec![c]);
                self.push(Instr::Solve(body, c));
            }
            View::Builtin(rel, args) => {
                if !solve_builtin(rel, &args, &mut self.subst).map_err(EngineError::from)? {
                    return Ok(Flow::Fail);
                }
                self.set(n, Kind::Builtin, vec![]);
            }
            View::Atom { .. } => {
                // Resolving exposes bound arguments to the candidate prefilter.
                let goal = if goal.term().contains_meta() { Formula::from_term(self.subst.resolve(goal.term())) } else { goal };
                if !goal.is_rigid_atom() {
                    return Err(EngineError::Flexible(goal).into());
                }
                let cands = Rc::new(self.candidates(&goal));
                return self.try_candidates(goal, n, cands, 0);
            }
        }
        Ok(Flow::Go)
    }

    /// Clauses whose elaboration may close `goal`: reachable bounded
    /// resources first, then the unbounded context.
    fn candidates(&mut self, goal: &Formula) -> Vec<Candidate> {
        let mut sources = Vec::new();
        for pos in self.regs.floor..self.slots.len() {
            let s = &self.slots[pos];
            if !s.consumed {
                sources.push((ClauseRef::Bounded(s.id), Some(pos), s.formula.clone(), false));
            }
        }
        let heads = self.gamma_heads();
        for (i, c) in self.regs.gamma.iter().enumerate() {
            let checked = heads[i].is_some();
            if heads[i].as_ref().is_some_and(|hs| !hs.iter().any(|h| head_compatible(h, goal))) {
                continue;
            }
            sources.push((ClauseRef::Unbounded(i), None, c.clone(), checked));
        }
        let mut out = Vec::new();
        for (clause, pos, formula, checked) in sources {
            let formula = if formula.term().contains_meta() {
                Formula::from_term(self.subst.resolve(formula.term()))
            } else {
                formula
            };
            if !checked && !head_may_match(&formula, goal) {
                continue;
            }
            let mut next = self.regs.next_var;
            let mut fresh = |ty: &crate::term::SimpleType| {
                let m = Term::meta(MetaVar { id: next, ty: ty.clone() });
                next += 1;
                m
            };
            let elabs = elaborate(&formula, Some(goal), &mut fresh);
            self.regs.next_var = next;
            out.extend(elabs.into_iter().map(|e| Candidate { clause, pos, elab: Rc::new(e) }));
        }
        out
    }

    fn gamma_heads(&mut self) -> Rc<Vec<Option<Vec<Formula>>>> {
        let gamma = &self.regs.gamma;
        let entry = self.heads.entry(Rc::as_ptr(gamma)).or_insert_with(|| {
            let hs = gamma.iter().map(|c| (!c.term().contains_meta()).then(|| clause_heads(c))).collect();
            (gamma.clone(), Rc::new(hs))
        });
        entry.1.clone()
    }

    fn try_candidates(&mut self, goal: Formula, n: usize, cands: Rc<Vec<Candidate>>, start: usize) -> Result<Flow, Halt> {
        for i in start..cands.len() {
            let at = self.snapshot();
            if self.apply(&goal, n, &cands[i])? {
                if i + 1 < cands.len() {
                    let alt = Alt::Atom { goal, node: n, cands: cands.clone(), next: i + 1 };
                    self.choices.push(Choice { at, alt });
                }
                return Ok(Flow::Go);
            }
            self.restore(at);
        }
        Ok(Flow::Fail)
    }

    fn apply(&mut self, goal: &Formula, n: usize, cand: &Candidate) -> Result<bool, Halt> {
        let triple = &cand.elab.triple;
        if self.subst.unify(triple.head.term(), goal.term()).is_err() {
            return Ok(false);
        }
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Halt::Budget);
        }
        if let Some(pos) = cand.pos {
            self.consume(pos);
        }
        let unbounded: Vec<usize> = triple.unbounded.iter().map(|u| self.alloc(u.clone())).collect();
        let bounded: Vec<usize> = triple.bounded.iter().map(|b| self.alloc(b.clone())).collect();
        for (b, &c) in triple.bounded.iter().zip(&bounded).rev() {
            self.push(Instr::Solve(b.clone(), c));
        }
        for (u, &c) in triple.unbounded.iter().zip(&unbounded).rev() {
            self.push(Instr::Floor(u.clone(), c));
        }
        let children = unbounded.into_iter().chain(bounded).collect();
        self.set(n, Kind::Bc { clause: cand.clause, elab: cand.elab.clone() }, children);
        Ok(true)
    }

    // -----------------------------------------------------------------
    // Reconstruction

    fn build(self) -> Proved {
        let len = self.nodes.len();
        // Children always have larger indices than their parent.
        let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); len];
        let mut slack = vec![false; len];
        for n in (0..len).rev() {
            let node = &self.nodes[n];
            let mut u = BTreeSet::new();
            for &c in &node.children {
                u.extend(used[c].iter().copied());
            }
            let kids: Vec<bool> = node.children.iter().map(|&c| slack[c]).collect();
            slack[n] = match &node.kind {
                Kind::Top => true,
                Kind::With => kids.iter().all(|&x| x),
                Kind::Bang | Kind::Builtin | Kind::Pending => false,
                Kind::Bc { clause, elab } => {
                    if let ClauseRef::Bounded(id) = clause {
                        u.insert(*id);
                    }
                    kids[elab.triple.unbounded.len()..].iter().any(|&x| x)
                }
                _ => kids.iter().any(|&x| x),
            };
            used[n] = u;
        }

        let mut delta: Vec<Vec<usize>> = vec![Vec::new(); len];
        delta[0] = (0..self.initial).collect();
        for n in 0..len {
            let node = &self.nodes[n];
            let here = delta[n].clone();
            let split = |avail: &[usize], kids: &[usize], delta: &mut Vec<Vec<usize>>| {
                let mut rest: BTreeSet<usize> = avail.iter().copied().collect();
                for &k in kids {
                    let mine: Vec<usize> = avail.iter().copied().filter(|id| used[k].contains(id)).collect();
                    for id in &mine {
                        rest.remove(id);
                    }
                    delta[k] = mine;
                }
                if !rest.is_empty() {
                    let k = *kids.iter().find(|&&k| slack[k]).expect("leftover resources need a top");
                    delta[k].extend(rest);
                    delta[k].sort_unstable();
                }
            };
            match &node.kind {
                Kind::Tensor => split(&here, &node.children, &mut delta),
                Kind::Bc { clause, elab } => {
                    let avail: Vec<usize> = match clause {
                        ClauseRef::Bounded(id) => here.iter().copied().filter(|x| x != id).collect(),
                        ClauseRef::Unbounded(_) => here.clone(),
                    };
                    let k = elab.triple.unbounded.len();
                    split(&avail, &node.children[k..], &mut delta);
                }
                Kind::Lolli(id) => {
                    let mut d = here.clone();
                    d.push(*id);
                    delta[node.children[0]] = d;
                }
                Kind::Bang => {}
                _ => {
                    for &c in &node.children {
                        delta[c] = here.clone();
                    }
                }
            }
        }

        let mut r = Resolver { subst: &self.subst, memo: HashMap::new(), gammas: HashMap::new() };
        let slot_formulas: Vec<Formula> = self.slot_formulas.iter().map(|f| r.formula(f)).collect();
        let mut trace = Vec::new();
        let tree = self.tree(0, &delta, &slot_formulas, &mut r, &mut trace);
        let steps = self.steps;
        Proved { tree, subst: self.subst, trace, steps }
    }

    fn tree(
        &self,
        n: usize,
        delta: &[Vec<usize>],
        slots: &[Formula],
        r: &mut Resolver<'_>,
        trace: &mut Vec<BcEvent>,
    ) -> ProofTree {
        let node = &self.nodes[n];
        let gamma = r.gamma(&node.gamma);
        let d: Vec<Formula> = delta[n].iter().map(|&id| slots[id].clone()).collect();
        let goal = r.formula(&node.goal);
        let conclusion = Sequent::new(gamma, d, goal);
        let (rule, principal, witness, triple) = match &node.kind {
            Kind::Top => (Rule::TopR, None, None, None),
            Kind::Builtin => (Rule::Builtin, None, None, None),
            Kind::Bang => (Rule::BangR, None, None, None),
            Kind::With => (Rule::WithR, None, None, None),
            Kind::Lolli(_) => (Rule::LolliR, None, None, None),
            Kind::Imp => (Rule::ImpR, None, None, None),
            Kind::Tensor => (Rule::TensorR, None, None, None),
            Kind::Oplus(1) => (Rule::OplusR1, None, None, None),
            Kind::Oplus(_) => (Rule::OplusR2, None, None, None),
            Kind::Forall(e) => (Rule::ForallR, None, Some(e.clone()), None),
            Kind::Exists(m) => (Rule::ExistsR, None, Some(r.term(m)), None),
            Kind::Bc { clause, elab } => {
                let triple: ClauseTriple = elab.triple.map_terms(&mut |t| r.term(t));
                let instances = elab
                    .path
                    .iter()
                    .filter_map(|s| match s {
                        Step::Forall(t) => Some(r.term(t)),
                        _ => None,
                    })
                    .collect();
                let (rule, principal) = match clause {
                    ClauseRef::Unbounded(i) => (Rule::BCu, *i),
                    ClauseRef::Bounded(id) => {
                        (Rule::BCb, delta[n].iter().position(|x| x == id).expect("principal in context"))
                    }
                };
                trace.push(BcEvent { rule, clause: *clause, head: triple.head.clone(), instances });
                (rule, Some(principal), None, Some(triple))
            }
            Kind::Pending => unreachable!("unsolved node in a finished proof"),
        };
        let premises = node.children.iter().map(|&c| self.tree(c, delta, slots, r, trace)).collect();
        let mut t = ProofTree::new(rule, conclusion, premises);
        t.principal = principal;
        t.witness = witness;
        t.triple = triple;
        t
    }
}

struct Resolver<'a> {
    subst: &'a Substitution,
    memo: HashMap<u32, Term>,
    gammas: HashMap<*const Vec<Formula>, Vec<Formula>>,
}

impl Resolver<'_> {
    fn term(&mut self, t: &Term) -> Term {
        self.subst.resolve_memo(t, &mut self.memo)
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        Formula::from_term(self.term(f.term()))
    }

    fn gamma(&mut self, g: &Rc<Vec<Formula>>) -> Vec<Formula> {
        let key = Rc::as_ptr(g);
        if let Some(v) = self.gammas.get(&key) {
            return v.clone();
        }
        let v: Vec<Formula> = g.iter().map(|f| self.formula(f)).collect();
        self.gammas.insert(key, v.clone());
        v
    }
}
