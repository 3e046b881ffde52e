use super::*;
use crate::kernel::check_reduced;
use crate::text::{parse_formula, Signature};

fn fs(src: &[&str], sig: &mut Signature) -> Vec<Formula> {
    src.iter().map(|s| parse_formula(s, sig).unwrap()).collect()
}

fn run(gamma: &[&str], delta: &[&str], goal: &str) -> Outcome {
    let mut sig = Signature::new();
    let g = fs(gamma, &mut sig);
    let d = fs(delta, &mut sig);
    let goal = parse_formula(goal, &mut sig).unwrap();
    let out = prove(&g, &d, &goal, &SearchConfig::default()).unwrap();
    if let Some(p) = out.proved() {
        check_reduced(&p.tree).unwrap_or_else(|e| panic!("{e}\n{}", crate::kernel::text::print_proof(&p.tree)));
        assert_eq!(p.tree.conclusion, Sequent::new(g, d, goal));
    }
    out
}

#[test]
fn chain_uses_three_backchaining_steps() {
    let out = run(&["a1"], &["a1 -o a2", "a2 -o a3"], "a3");
    let p = out.proved().unwrap();
    assert_eq!(p.tree.size(), 3);
    let lines: Vec<String> = p.trace.iter().map(|e| e.to_string()).collect();
    assert_eq!(lines, vec!["BCb b1 a3", "BCb b0 a2", "BCu u0 a1"]);
}

#[test]
fn linear_hypothesis_cannot_be_reused() {
    assert!(matches!(run(&[], &["a -o a -o b", "a"], "b"), Outcome::Unprovable { .. }));
    assert!(run(&["a"], &["a -o a -o b"], "b").proved().is_some());
}

#[test]
fn implication_variant_is_provable_and_lolli_is_not() {
    // One copy of a1 must feed both branches of the &.
    assert!(matches!(run(&[], &["a1"], "(a1 -o a2) -o (a1 -o a3) -o a2 & a3"), Outcome::Unprovable { .. }));
    assert!(run(&[], &[], "a1 & a2 => a1 * a2").proved().is_some());
    assert!(matches!(run(&[], &[], "a1 & a2 -o a1 * a2"), Outcome::Unprovable { .. }));
}

#[test]
fn tensor_splits_lazily() {
    let out = run(&[], &["c", "b", "a"], "a * (b * c)");
    assert_eq!(out.proved().unwrap().trace.len(), 3);
    assert!(matches!(run(&[], &["a", "b"], "a"), Outcome::Unprovable { .. }));
}

#[test]
fn top_absorbs_leftovers() {
    let p = run(&[], &["a", "b", "c"], "b * top").proved().cloned().unwrap();
    assert_eq!(p.tree.premises[1].conclusion.delta.len(), 2);
    assert!(run(&[], &["a", "b"], "(b -o top) * a").proved().is_some());
}

#[test]
fn with_branches_share_resources() {
    assert!(run(&[], &["a", "b"], "(a * b) & (b * a)").proved().is_some());
    assert!(matches!(run(&[], &["a", "b"], "(a * b) & a"), Outcome::Unprovable { .. }));
    assert!(run(&[], &["a", "b"], "(a * b) & (a * top)").proved().is_some());
    assert!(run(&[], &["a", "b"], "(a * top) & (b * top)").proved().is_some());
}

#[test]
fn bang_needs_an_empty_context() {
    assert!(run(&["a"], &[], "!a").proved().is_some());
    assert!(matches!(run(&[], &["a"], "!a"), Outcome::Unprovable { .. }));
    assert!(run(&[], &["a"], "a * !(b -o b)").proved().is_some());
}

#[test]
fn oplus_backtracks() {
    let p = run(&[], &["b"], "a + b").proved().cloned().unwrap();
    assert_eq!(p.tree.rule, Rule::OplusR2);
}

#[test]
fn quantifiers_and_builtins() {
    let mut sig = Signature::new();
    let nat = crate::term::SimpleType::Nat;
    sig.declare("p", crate::term::SimpleType::curried(&[nat.clone(), nat], crate::term::SimpleType::O)).unwrap();
    let gamma = vec![parse_formula("all x : nat. all y : nat. #add3 x 1 y -o p x y", &mut sig).unwrap()];
    let goal = parse_formula("ex z : nat. p 4 z * #eq z 5", &mut sig).unwrap();
    let out = prove(&gamma, &[], &goal, &SearchConfig::default()).unwrap();
    let p = out.proved().unwrap();
    check_reduced(&p.tree).unwrap();
    assert_eq!(p.tree.witness, Some(Term::nat(5)));
    assert_eq!(p.trace[0].instances, vec![Term::nat(4), Term::nat(5)]);
}

#[test]
fn universal_goal_uses_a_fresh_eigenvariable() {
    assert!(run(&["all x : i. q x"], &[], "all y : i. q y").proved().is_some());
}

#[test]
fn flexible_goal_is_an_error() {
    let mut sig = Signature::new();
    let goal = parse_formula("ex p : o. p", &mut sig).unwrap();
    assert!(matches!(prove(&[], &[], &goal, &SearchConfig::default()), Err(EngineError::Flexible(_))));
}

#[test]
fn budget_stops_a_looping_search() {
    let mut sig = Signature::new();
    let gamma = fs(&["a -o a"], &mut sig);
    let goal = parse_formula("a", &mut sig).unwrap();
    let out = prove(&gamma, &[], &goal, &SearchConfig { budget: 50 }).unwrap();
    assert!(matches!(out, Outcome::BudgetExhausted { steps: 51 }));
}

#[test]
fn search_is_deterministic() {
    let a = run(&["a1", "a1 -o a3"], &["a1 -o a2", "a2 -o a3"], "a3 * top");
    let b = run(&["a1", "a1 -o a3"], &["a1 -o a2", "a2 -o a3"], "a3 * top");
    assert_eq!(a.proved().unwrap().tree, b.proved().unwrap().tree);
}
