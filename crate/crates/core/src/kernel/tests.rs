use super::text::{parse_proof, print_proof};
use super::*;
use crate::formula::BuiltinRel;
use crate::term::{Eigen, SimpleType};
use crate::text::{parse_formula, Signature};

const NONUNIFORM: &str = include_str!("../../../../data/proofs/with_imp_nonuniform.proof");
const UNIFORM: &str = include_str!("../../../../data/proofs/with_imp_uniform.proof");
const FORWARD: &str = include_str!("../../../../data/proofs/chain_forward.proof");
const BACKWARD: &str = include_str!("../../../../data/proofs/chain_backward.proof");

fn proof(src: &str) -> ProofTree {
    parse_proof(src, &mut Signature::new()).unwrap()
}

fn f(src: &str) -> Formula {
    parse_formula(src, &mut Signature::new()).unwrap()
}

#[test]
fn bundled_proofs_check() {
    for src in [NONUNIFORM, UNIFORM, FORWARD, BACKWARD] {
        check_full(&proof(src)).unwrap();
    }
}

#[test]
fn classifier_verdicts_on_bundled_proofs() {
    let (nu, u, fw, bw) = (proof(NONUNIFORM), proof(UNIFORM), proof(FORWARD), proof(BACKWARD));
    assert!(!is_uniform(&nu));
    assert!(is_uniform(&u));
    assert!(is_uniform(&fw) && !is_simple(&fw) && !is_coincided(&fw));
    assert!(is_simple(&bw) && is_coincided(&bw));
    assert_eq!(u.size(), 8);
}

#[test]
fn nonuniformity_measure_counts_offending_nodes() {
    let nu = proof(NONUNIFORM);
    assert_eq!(nonuniformity_measure(&nu), 4);
    let offenders = uniformity(&nu).offenders;
    let rules: Vec<Rule> = offenders.iter().map(|p| nu.at(p).unwrap().rule).collect();
    assert_eq!(rules, vec![Rule::Absorb, Rule::Absorb, Rule::WithL1, Rule::WithL2]);
    assert_eq!(nonuniformity_measure(&proof(UNIFORM)), 0);
}

#[test]
fn single_left_rule_under_lolli_right() {
    let src = "(withL1@0 ; a & b |- c -o a
                 (lolliR ; a |- c -o a
                   (id@0 ; a |- a)))";
    // Not checkable (c is left over) but the measure only looks at goals.
    let p = proof(src);
    assert_eq!(nonuniformity_measure(&p), 1);
    assert!(check_full(&p).is_err());
}

#[test]
fn duplicated_context_at_tensor_split_is_rejected() {
    let bad = UNIFORM.replace("(absorb@0 a1 & a2 ; |- a2", "(absorb@0 a1 & a2 ; a1 |- a2");
    let err = check_full(&proof(&bad)).unwrap_err();
    assert_eq!(err.rule, Rule::TensorR);
    assert_eq!(err.path, vec![0]);
}

#[test]
fn single_id_is_uniform_simple_and_coincided() {
    let p = proof("(id@0 ; a |- a)");
    check_full(&p).unwrap();
    assert!(is_uniform(&p) && is_simple(&p) && is_coincided(&p));
}

#[test]
fn marking_follows_right_premise_of_lolli_left() {
    let bw = proof(BACKWARD);
    let m = compute_marking(&bw);
    assert_eq!(m.marked(&bw), Some(&f("a2 -o a3")));
    let fw = proof(FORWARD);
    assert_eq!(compute_marking(&fw).mark, None);
}

#[test]
fn print_parse_round_trip() {
    for src in [NONUNIFORM, UNIFORM, FORWARD, BACKWARD] {
        let p = proof(src);
        let printed = print_proof(&p);
        assert_eq!(proof(&printed), p, "{printed}");
        assert_eq!(print_proof(&proof(&printed)), printed);
    }
}

#[test]
fn eigenvariable_must_be_fresh() {
    let mut sig = Signature::new();
    sig.declare("p", SimpleType::arrow(SimpleType::Iota, SimpleType::O)).unwrap();
    let ok = "(forallR ; p $1:i |- all x : i. p x -o p x [$2:i]
                (lolliR ; p $1:i |- p $2:i -o p $2:i
                  (lolliL@0 ; p $1:i, p $2:i |- p $2:i)))";
    // Shape only; the leaf is wrong on purpose and is reported below the root.
    let p = parse_proof(ok, &mut sig.clone()).unwrap();
    assert_ne!(check_full(&p).unwrap_err().path, vec![]);
    let clash = ok.replace("[$2:i]", "[$1:i]");
    let p = parse_proof(&clash, &mut sig).unwrap();
    let err = check_full(&p).unwrap_err();
    assert_eq!(err.path, Vec::<usize>::new());
    assert!(err.reason.contains("occurs"), "{err}");
}

#[test]
fn forall_right_and_left() {
    let src = "sig p : i -> o.
        (lolliR ; |- (all y : i. p y) -o (all x : i. p x)
          (forallR ; all y : i. p y |- all x : i. p x [$7:i]
            (forallL@0 ; all y : i. p y |- p $7:i [$7:i]
              (id@0 ; p $7:i |- p $7:i))))";
    let p = proof(src);
    check_full(&p).unwrap();
    assert!(is_coincided(&p));
    assert_eq!(print_proof(&p).lines().count(), 5);
}

#[test]
fn builtin_leaves() {
    let gt = Formula::builtin(BuiltinRel::Gt, vec![Term::nat(3), Term::nat(1)]);
    let leaf = ProofTree::new(Rule::Builtin, Sequent::new(vec![], vec![], gt), vec![]);
    check_full(&leaf).unwrap();
    check_reduced(&leaf).unwrap();
    let le = Formula::builtin(BuiltinRel::Gt, vec![Term::nat(3), Term::nat(3)]);
    let leaf = ProofTree::new(Rule::Builtin, Sequent::new(vec![], vec![], le), vec![]);
    assert!(check_full(&leaf).is_err());
}

#[test]
fn reduced_system_rejects_left_rules() {
    let err = check_reduced(&proof(BACKWARD)).unwrap_err();
    assert_eq!(err.rule, Rule::LolliL);
    assert!(err.reason.contains("not part of the backchaining system"));
}

fn backward_reduced() -> ProofTree {
    proof(
        "(BCb@1 a1 ; a1 -o a2, a2 -o a3 |- a3 { | a2 | a3}
           (BCb@0 a1 ; a1 -o a2 |- a2 { | a1 | a2}
             (BCu@0 a1 ; |- a1 { | | a1})))",
    )
}

#[test]
fn reduced_proof_checks_and_expands() {
    let p = backward_reduced();
    check_reduced(&p).unwrap();
    assert!(check_full(&p).is_err());
    let full = expand_reduced(&p).unwrap();
    check_full(&full).unwrap();
    assert!(is_coincided(&full));
    assert!(full.same_conclusion(&p));
}

#[test]
fn triple_outside_the_elaboration_is_rejected() {
    let bad = print_proof(&backward_reduced()).replace("{ | a1 | a2}", "{ | a3 | a2}");
    let err = check_reduced(&proof(&bad)).unwrap_err();
    assert!(err.reason.contains("not in the elaboration"), "{err}");
}

#[test]
fn backchaining_with_quantified_clause() {
    let src = "sig p : nat -> o.
               sig q : nat -> o.
        (BCu@0 all x : nat. q x => p x ; |- p 3 {q 3 | | p 3}
          (BCu@1 all x : nat. q x => p x, q 3 ; |- q 3 { | | q 3}))";
    // Premise Γ must match the conclusion's.
    assert!(check_reduced(&proof(src)).is_err());
    let src = "sig p : nat -> o.
               sig q : nat -> o.
        (BCu@0 all x : nat. q x => p x, q 3 ; |- p 3 {q 3 | | p 3}
          (BCu@1 all x : nat. q x => p x, q 3 ; |- q 3 { | | q 3}))";
    let p = proof(src);
    check_reduced(&p).unwrap();
    let full = expand_reduced(&p).unwrap();
    check_full(&full).unwrap();
    assert_eq!(full.count_rule(Rule::ForallL), 1);
    assert_eq!(full.count_rule(Rule::ImpL), 1);
}

#[test]
fn missing_premise_is_reported() {
    let src = UNIFORM.replace("        (id@0 a1 & a2 ; a2 |- a2)", "");
    let err = check_full(&proof(&src)).unwrap_err();
    assert_eq!(err.rule, Rule::WithL2);
    assert!(err.reason.contains("premise"));
}

#[test]
fn eigen_witness_type_is_checked() {
    let e = Term::eigen(Eigen { id: 1, ty: SimpleType::Nat });
    let goal = parse_formula("all x : i. top", &mut Signature::new()).unwrap();
    let top = ProofTree::new(Rule::TopR, Sequent::new(vec![], vec![], Formula::top()), vec![]);
    let p = ProofTree::new(Rule::ForallR, Sequent::new(vec![], vec![], goal), vec![top]).with_witness(e);
    assert!(check_full(&p).unwrap_err().reason.contains("type"));
}
