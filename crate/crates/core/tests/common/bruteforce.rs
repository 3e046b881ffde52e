//! An independent prover for the propositional fragment of the full
//! calculus, and a generator of small random sequents.
//!
//! The prover tries every rule instance in a random order, with iterative
//! deepening and a memo of sequents already refuted at a given depth. It
//! shares nothing with the engine, so it can serve as an oracle for it, and
//! its proofs are typically far from uniform, which makes them good input
//! for the normalizer.

use std::collections::HashMap;

use lolli_core::kernel::{ProofTree, Rule, Sequent};
use lolli_core::term::Const;
use lolli_core::{Formula, SimpleType, Term, View};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Prover {
    rng: ChaCha8Rng,
    /// Deepest bound at which a sequent (by canonical key) was refuted.
    refuted: HashMap<String, usize>,
    expansions: usize,
    limit: usize,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Search {
    Found(ProofTree),
    /// No proof within the depth bound.
    NotFound,
    /// Gave up after the expansion limit.
    GaveUp,
}

struct Abort;

fn key(s: &Sequent) -> String {
    let mut g: Vec<String> = s.gamma.iter().map(|f| f.to_string()).collect();
    g.sort();
    g.dedup();
    let mut d: Vec<String> = s.delta.iter().map(|f| f.to_string()).collect();
    d.sort();
    format!("{} ; {} |- {}", g.join(", "), d.join(", "), s.goal)
}

fn without(xs: &[Formula], i: usize) -> Vec<Formula> {
    let mut v = xs.to_vec();
    v.remove(i);
    v
}

fn plus(xs: &[Formula], f: Formula) -> Vec<Formula> {
    let mut v = xs.to_vec();
    v.push(f);
    v
}

/// Every way to split `xs` in two, by bit mask.
fn splits(xs: &[Formula]) -> Vec<(Vec<Formula>, Vec<Formula>)> {
    (0..1u32 << xs.len())
        .map(|mask| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (i, x) in xs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.push(x.clone());
                } else {
                    b.push(x.clone());
                }
            }
            (a, b)
        })
        .collect()
}

/// One way to reduce a sequent: the rule, its premises, and the principal.
struct Step {
    rule: Rule,
    premises: Vec<Sequent>,
    principal: Option<usize>,
}

impl Prover {
    pub fn new(seed: u64, limit: usize) -> Prover {
        Prover { rng: ChaCha8Rng::seed_from_u64(seed), refuted: HashMap::new(), expansions: 0, limit }
    }

    /// Search for a proof of at most `max_depth` rule applications on any
    /// branch.
    pub fn prove(&mut self, s: &Sequent, max_depth: usize) -> Search {
        self.refuted.clear();
        self.expansions = 0;
        for depth in 1..=max_depth {
            match self.search(s, depth) {
                Ok(Some(p)) => return Search::Found(p),
                Ok(None) => {}
                Err(Abort) => return Search::GaveUp,
            }
        }
        Search::NotFound
    }

    fn search(&mut self, s: &Sequent, depth: usize) -> Result<Option<ProofTree>, Abort> {
        if depth == 0 {
            return Ok(None);
        }
        let k = key(s);
        if self.refuted.get(&k).is_some_and(|&d| d >= depth) {
            return Ok(None);
        }
        self.expansions += 1;
        if self.expansions > self.limit {
            return Err(Abort);
        }
        let mut steps = self.steps(s);
        steps.shuffle(&mut self.rng);
        'steps: for step in steps {
            let mut premises = Vec::new();
            for q in &step.premises {
                match self.search(q, depth - 1)? {
                    Some(p) => premises.push(p),
                    None => continue 'steps,
                }
            }
            let mut p = ProofTree::new(step.rule, s.clone(), premises);
            p.principal = step.principal;
            return Ok(Some(p));
        }
        let e = self.refuted.entry(k).or_insert(depth);
        *e = (*e).max(depth);
        Ok(None)
    }

    fn steps(&self, s: &Sequent) -> Vec<Step> {
        let (gamma, delta, goal) = (&s.gamma, &s.delta, &s.goal);
        let seq = |g: &[Formula], d: Vec<Formula>, goal: Formula| Sequent::new(g.to_vec(), d, goal);
        let step = |rule, premises, principal| Step { rule, premises, principal };
        let mut out = Vec::new();

        if delta.len() == 1 && goal.is_atom() && delta[0] == *goal {
            out.push(step(Rule::Id, vec![], Some(0)));
        }
        match goal.view() {
            View::Top => out.push(step(Rule::TopR, vec![], None)),
            View::With(a, b) => {
                out.push(step(Rule::WithR, vec![seq(gamma, delta.clone(), a), seq(gamma, delta.clone(), b)], None))
            }
            View::Tensor(a, b) => {
                for (l, r) in splits(delta) {
                    out.push(step(Rule::TensorR, vec![seq(gamma, l, a.clone()), seq(gamma, r, b.clone())], None));
                }
            }
            View::Oplus(a, b) => {
                out.push(step(Rule::OplusR1, vec![seq(gamma, delta.clone(), a)], None));
                out.push(step(Rule::OplusR2, vec![seq(gamma, delta.clone(), b)], None));
            }
            View::Lolli(a, b) => out.push(step(Rule::LolliR, vec![seq(gamma, plus(delta, a), b)], None)),
            View::Imp(a, b) => {
                let g = if gamma.contains(&a) { gamma.clone() } else { plus(gamma, a) };
                out.push(step(Rule::ImpR, vec![seq(&g, delta.clone(), b)], None));
            }
            View::Bang(a) if delta.is_empty() => out.push(step(Rule::BangR, vec![seq(gamma, vec![], a)], None)),
            _ => {}
        }
        for (i, c) in gamma.iter().enumerate() {
            out.push(step(Rule::Absorb, vec![seq(gamma, plus(delta, c.clone()), goal.clone())], Some(i)));
        }
        for (i, d) in delta.iter().enumerate() {
            let rest = without(delta, i);
            match d.view() {
                View::With(a, b) => {
                    out.push(step(Rule::WithL1, vec![seq(gamma, plus(&rest, a), goal.clone())], Some(i)));
                    out.push(step(Rule::WithL2, vec![seq(gamma, plus(&rest, b), goal.clone())], Some(i)));
                }
                View::Lolli(a, b) => {
                    for (l, r) in splits(&rest) {
                        let premises = vec![seq(gamma, l, a.clone()), seq(gamma, plus(&r, b.clone()), goal.clone())];
                        out.push(step(Rule::LolliL, premises, Some(i)));
                    }
                }
                View::Imp(a, b) => {
                    let premises = vec![seq(gamma, vec![], a), seq(gamma, plus(&rest, b), goal.clone())];
                    out.push(step(Rule::ImpL, premises, Some(i)));
                }
                _ => {}
            }
        }
        out
    }
}

pub fn atom(i: usize) -> Formula {
    Formula::from_term(Term::constant(Const::nonlogical(&format!("a{i}"), SimpleType::O)))
}

/// Random goals and clauses over `atoms` propositional atoms.
pub struct SequentGen {
    rng: ChaCha8Rng,
}

impl SequentGen {
    pub fn new(seed: u64) -> SequentGen {
        SequentGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn atom(&mut self, atoms: usize) -> Formula {
        atom(self.rng.gen_range(1..=atoms))
    }

    pub fn goal(&mut self, atoms: usize, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return if self.rng.gen_bool(0.05) { Formula::top() } else { self.atom(atoms) };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..7) {
            0 => Formula::with(self.goal(atoms, d), self.goal(atoms, d)),
            1 | 2 => Formula::tensor(self.goal(atoms, d), self.goal(atoms, d)),
            3 => Formula::oplus(self.goal(atoms, d), self.goal(atoms, d)),
            4 => Formula::lolli(self.clause(atoms, d), self.goal(atoms, d)),
            5 => Formula::imp(self.clause(atoms, d), self.goal(atoms, d)),
            _ => Formula::bang(self.goal(atoms, d)),
        }
    }

    pub fn clause(&mut self, atoms: usize, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return self.atom(atoms);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..4) {
            0 => Formula::with(self.clause(atoms, d), self.clause(atoms, d)),
            1 | 2 => Formula::lolli(self.goal(atoms, d), self.clause(atoms, d)),
            _ => Formula::imp(self.goal(atoms, d), self.clause(atoms, d)),
        }
    }

    /// At most 3 atoms, 2 unbounded and 3 bounded clauses, connective depth
    /// at most 3.
    pub fn sequent(&mut self) -> Sequent {
        let atoms = self.rng.gen_range(1..=3);
        let ng = self.rng.gen_range(0..=2);
        let nd = self.rng.gen_range(0..=3);
        let gamma = (0..ng).map(|_| self.clause(atoms, 2)).collect();
        let delta = (0..nd).map(|_| self.clause(atoms, 3)).collect();
        let goal = self.goal(atoms, 3);
        Sequent::new(gamma, delta, goal)
    }
}

/// Proofs of random sequents: `(sequents tried, proofs found)`.
pub fn proof_corpus(seed: u64, attempts: usize, limit: usize, depth: usize) -> (usize, Vec<ProofTree>) {
    let mut gen = SequentGen::new(seed);
    let mut prover = Prover::new(seed ^ 0x9e37_79b9, limit);
    let mut found = Vec::new();
    for _ in 0..attempts {
        if let Search::Found(p) = prover.prove(&gen.sequent(), depth) {
            found.push(p);
        }
    }
    (attempts, found)
}
