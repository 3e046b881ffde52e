//! Uniform, simple and coincided proofs.

use crate::formula::{Formula, View};

use super::{ProofTree, Rule};

/// Is `rule` the right introduction of the top connective of `goal`?
/// Atomic goals (including builtins) have no right introduction.
pub(crate) fn introduces(rule: Rule, goal: &Formula) -> Option<bool> {
    let ok = match goal.view() {
        View::Atom { .. } | View::Builtin(..) => return None,
        View::Top => rule == Rule::TopR,
        View::Bang(_) => rule == Rule::BangR,
        View::With(..) => rule == Rule::WithR,
        View::Lolli(..) => rule == Rule::LolliR,
        View::Imp(..) => rule == Rule::ImpR,
        View::Tensor(..) => rule == Rule::TensorR,
        View::Oplus(..) => matches!(rule, Rule::OplusR1 | Rule::OplusR2),
        View::Forall(_) => rule == Rule::ForallR,
        View::Exists(_) => rule == Rule::ExistsR,
    };
    Some(ok)
}

/// Does this node violate uniformity on its own?
pub(crate) fn is_offender(p: &ProofTree) -> bool {
    introduces(p.rule, p.goal()) == Some(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformityReport {
    pub uniform: bool,
    /// Paths of nodes with a complex goal not introduced by their rule, in
    /// pre-order.
    pub offenders: Vec<Vec<usize>>,
}

pub fn uniformity(p: &ProofTree) -> UniformityReport {
    let mut offenders = Vec::new();
    p.visit(&mut |path, t| {
        if is_offender(t) {
            offenders.push(path.to_vec());
        }
    });
    UniformityReport { uniform: offenders.is_empty(), offenders }
}

pub fn is_uniform(p: &ProofTree) -> bool {
    uniformity(p).uniform
}

/// Number of nodes whose conclusion has a complex goal that the node's rule
/// does not introduce.
pub fn nonuniformity_measure(p: &ProofTree) -> usize {
    uniformity(p).offenders.len()
}

/// The marked bounded formula of every node, as a position in its Δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    pub mark: Option<usize>,
    pub premises: Vec<Marking>,
}

impl Marking {
    pub fn marked<'a>(&self, p: &'a ProofTree) -> Option<&'a Formula> {
        p.conclusion.delta.get(self.mark?)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Marking> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get(i)?;
        }
        Some(cur)
    }
}

/// The product a left rule places in its main premise.
pub(crate) fn left_product(p: &ProofTree) -> Option<Formula> {
    let f = p.conclusion.delta.get(p.principal?)?;
    match (p.rule, f.view()) {
        (Rule::WithL1, View::With(a, _)) | (Rule::WithL2, View::With(_, a)) => Some(a),
        (Rule::LolliL, View::Lolli(_, b)) | (Rule::ImpL, View::Imp(_, b)) => Some(b),
        (Rule::ForallL, View::Forall(q)) => Some(q.instantiate(p.witness.as_ref()?)),
        _ => None,
    }
}

/// Index of the premise that receives the product of a left rule.
pub(crate) fn main_premise(rule: Rule) -> usize {
    match rule {
        Rule::LolliL | Rule::ImpL => 1,
        _ => 0,
    }
}

pub fn compute_marking(p: &ProofTree) -> Marking {
    // Post-order without recursion on deep proofs.
    enum Frame<'a> {
        Enter(&'a ProofTree),
        Exit(&'a ProofTree),
    }
    let mut stack = vec![Frame::Enter(p)];
    let mut done: Vec<Marking> = Vec::new();
    while let Some(fr) = stack.pop() {
        match fr {
            Frame::Enter(t) => {
                stack.push(Frame::Exit(t));
                for q in t.premises.iter().rev() {
                    stack.push(Frame::Enter(q));
                }
            }
            Frame::Exit(t) => {
                let premises = done.split_off(done.len() - t.premises.len());
                let mark = match t.rule {
                    Rule::Id => t.principal,
                    r if r.is_left() => {
                        let k = main_premise(r);
                        let marked = premises.get(k).and_then(|m| m.marked(&t.premises[k]));
                        match (marked, left_product(t)) {
                            (Some(m), Some(prod)) if *m == prod => t.principal,
                            _ => None,
                        }
                    }
                    _ => None,
                };
                done.push(Marking { mark, premises });
            }
        }
    }
    done.pop().expect("root marking")
}

/// Left rules acting on an unmarked formula, as paths.
pub(crate) fn unmarked_left_rules(p: &ProofTree) -> Vec<Vec<usize>> {
    let marking = compute_marking(p);
    let mut out = Vec::new();
    p.visit(&mut |path, t| {
        if t.rule.is_left() && marking.at(path).and_then(|m| m.mark).is_none() {
            out.push(path.to_vec());
        }
    });
    out
}

pub fn is_simple(p: &ProofTree) -> bool {
    is_uniform(p) && unmarked_left_rules(p).is_empty()
}

/// Absorb nodes whose copy is not acted on directly above.
pub(crate) fn detached_absorbs(p: &ProofTree) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    p.visit(&mut |path, t| {
        if t.rule == Rule::Absorb && !absorb_coincides(t) {
            out.push(path.to_vec());
        }
    });
    out
}

fn absorb_coincides(t: &ProofTree) -> bool {
    let (Some(copy), Some(q)) = (t.principal_formula(), t.premises.first()) else { return false };
    (q.rule.is_left() || q.rule == Rule::Id) && q.principal_formula() == Some(copy)
}

pub fn is_coincided(p: &ProofTree) -> bool {
    is_simple(p) && detached_absorbs(p).is_empty()
}
