//! Replacing backchaining steps by `absorb` and left-rule runs.

use crate::formula::{elaborate, Step, View};
use crate::term::{Eigen, MetaVar, SimpleType, Term};

use super::{minus, plus, triple_matches, without, ProofTree, Rule, Sequent, Violation};

/// Rewrite every `BCu`/`BCb` node of a reduced proof into the run of
/// full-calculus rules it abbreviates. Other nodes are kept.
pub fn expand_reduced(p: &ProofTree) -> Result<ProofTree, Violation> {
    let mut path = Vec::new();
    let mut fresh = 1u32 << 30;
    expand_at(p, &mut path, &mut fresh)
}

fn expand_at(p: &ProofTree, path: &mut Vec<usize>, fresh: &mut u32) -> Result<ProofTree, Violation> {
    let mut premises = Vec::with_capacity(p.premises.len());
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        premises.push(expand_at(q, path, fresh)?);
        path.pop();
    }
    if !p.rule.is_bc() {
        let mut out = p.clone();
        out.premises = premises;
        return Ok(out);
    }
    expand_bc(p, premises, fresh).map_err(|reason| Violation { path: path.clone(), rule: p.rule, reason })
}

fn expand_bc(p: &ProofTree, mut obligations: Vec<ProofTree>, fresh: &mut u32) -> Result<ProofTree, String> {
    let s = &p.conclusion;
    let triple = p.triple.as_ref().ok_or("missing clause triple")?;
    let clause = p.principal_formula().ok_or("missing principal")?.clone();

    let base = *fresh;
    let mut gen = |ty: &SimpleType| {
        let t = Term::meta(MetaVar { id: *fresh, ty: ty.clone() });
        *fresh += 1;
        t
    };
    let candidates = elaborate(&clause, Some(&triple.head), &mut gen);
    let (steps, subst) = candidates
        .into_iter()
        .find_map(|e| triple_matches(&e.triple, triple, base).map(|s| (e.path, s)))
        .ok_or("clause triple is not in the elaboration of the principal")?;

    let n = triple.unbounded.len();
    let bounded: Vec<ProofTree> = obligations.split_off(n);
    let mut unbounded = obligations.into_iter();
    let mut bounded = bounded.into_iter();

    // Walk the decomposition upwards, building nodes bottom to top. Each
    // entry is (rule, conclusion, principal, witness, side premise).
    let mut chain: Vec<(Rule, Sequent, usize, Option<Term>, Option<ProofTree>)> = Vec::new();
    let (mut delta, mut idx) = match p.rule {
        Rule::BCu => {
            let d = plus(&s.delta, &clause);
            chain.push((Rule::Absorb, s.clone(), p.principal.expect("checked"), None, None));
            let i = d.len() - 1;
            (d, i)
        }
        _ => (s.delta.clone(), p.principal.expect("checked")),
    };
    let mut current = clause;
    for step in steps {
        let here = Sequent::new(s.gamma.clone(), delta.clone(), s.goal.clone());
        let rest = without(&delta, idx);
        let (rule, product, witness, side) = match (step, current.view()) {
            (Step::With(k), View::With(a, b)) => {
                (if k == 1 { Rule::WithL1 } else { Rule::WithL2 }, if k == 1 { a } else { b }, None, None)
            }
            (Step::Forall(m), View::Forall(q)) => {
                let id = m.as_meta().expect("fresh metavariable").id;
                let w = subst.get(&id).cloned().unwrap_or_else(|| default_inhabitant(&q.ty, fresh));
                (Rule::ForallL, q.instantiate(&w), Some(w), None)
            }
            (Step::Lolli, View::Lolli(_, h)) => {
                let side = bounded.next().ok_or("too few bounded obligations")?;
                (Rule::LolliL, h, None, Some(side))
            }
            (Step::Imp, View::Imp(_, h)) => {
                let side = unbounded.next().ok_or("too few unbounded obligations")?;
                (Rule::ImpL, h, None, Some(side))
            }
            _ => return Err("elaboration path does not fit the clause".into()),
        };
        let mut next = rest;
        if let Some(side) = &side {
            next = minus(&next, &side.conclusion.delta)
                .ok_or("obligation context is not part of the remaining context")?;
        }
        next.push(product.clone());
        chain.push((rule, here, idx, witness, side));
        idx = next.len() - 1;
        delta = next;
        current = product;
    }
    if current != s.goal {
        return Err("clause head does not match the goal".into());
    }
    let mut tree = ProofTree::new(Rule::Id, Sequent::new(s.gamma.clone(), delta, s.goal.clone()), vec![])
        .with_principal(idx);
    while let Some((rule, conclusion, principal, witness, side)) = chain.pop() {
        let premises = match side {
            Some(side) => vec![side, tree],
            None => vec![tree],
        };
        let mut node = ProofTree::new(rule, conclusion, premises).with_principal(principal);
        node.witness = witness;
        tree = node;
    }
    Ok(tree)
}

/// A closed term of type `ty` for quantifiers whose variable is unused.
fn default_inhabitant(ty: &SimpleType, fresh: &mut u32) -> Term {
    match ty {
        SimpleType::Nat => Term::nat(0),
        _ => {
            let e = Term::eigen(Eigen { id: *fresh, ty: ty.clone() });
            *fresh += 1;
            e
        }
    }
}
