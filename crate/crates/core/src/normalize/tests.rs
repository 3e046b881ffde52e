use super::*;
use crate::kernel::text::parse_proof;
use crate::kernel::{check_full, check_reduced, is_coincided, is_simple, is_uniform, nonuniformity_measure};
use crate::text::Signature;

const NONUNIFORM: &str = include_str!("../../../../data/proofs/with_imp_nonuniform.proof");
const UNIFORM: &str = include_str!("../../../../data/proofs/with_imp_uniform.proof");
const FORWARD: &str = include_str!("../../../../data/proofs/chain_forward.proof");
const BACKWARD: &str = include_str!("../../../../data/proofs/chain_backward.proof");

fn proof(src: &str) -> ProofTree {
    let p = parse_proof(src, &mut Signature::new()).unwrap();
    check_full(&p).unwrap();
    p
}

#[test]
fn nonuniform_proof_becomes_the_uniform_one() {
    let out = to_uniform(&proof(NONUNIFORM)).unwrap();
    check_full(&out.proof).unwrap();
    assert!(is_uniform(&out.proof));
    assert_eq!(out.proof, proof(UNIFORM));
    assert_eq!(
        out.trace,
        vec![
            "withL2/tensorR@0.0.0.0",
            "withL1/tensorR@0.0.0",
            "absorb/tensorR@0.0",
            "absorb/tensorR@0",
        ]
    );
}

#[test]
fn measure_drops_by_one_per_elimination() {
    let p = proof(NONUNIFORM);
    let mut measures = vec![nonuniformity_measure(&p)];
    to_uniform_observed(&p, &mut |q| {
        check_full(q).unwrap();
        measures.push(nonuniformity_measure(q));
    })
    .unwrap();
    assert_eq!(measures, vec![4, 3, 2, 1, 0]);
}

#[test]
fn uniform_proof_is_a_fixpoint() {
    let p = proof(UNIFORM);
    let out = to_uniform(&p).unwrap();
    assert_eq!(out.proof, p);
    assert!(out.trace.is_empty());
}

#[test]
fn with_left_below_lolli_right_is_swapped() {
    let p = proof(
        "(withL1@0 ; a & b |- c -o a * c
           (lolliR ; a |- c -o a * c
             (tensorR ; a, c |- a * c
               (id@0 ; a |- a)
               (id@0 ; c |- c))))",
    );
    let out = to_uniform(&p).unwrap();
    assert_eq!(out.trace, vec!["withL1/lolliR@root", "withL1/tensorR@0"]);
    let expected = proof(
        "(lolliR ; a & b |- c -o a * c
           (tensorR ; a & b, c |- a * c
             (withL1@0 ; a & b |- a
               (id@0 ; a |- a))
             (id@0 ; c |- c)))",
    );
    assert_eq!(out.proof, expected);
}

#[test]
fn lolli_left_moves_into_the_branch_holding_its_product() {
    let p = proof(
        "(lolliL@0 ; p -o q, p, r |- r * q
           (id@0 ; p |- p)
           (tensorR ; r, q |- r * q
             (id@0 ; r |- r)
             (id@0 ; q |- q)))",
    );
    let out = to_uniform(&p).unwrap();
    check_full(&out.proof).unwrap();
    assert!(is_uniform(&out.proof));
    assert_eq!(out.proof.premises[1].rule, Rule::LolliL);
}

#[test]
fn with_right_duplicates_and_top_discards() {
    let p = proof(
        "(withL2@0 ; a & b |- top & b
           (withR ; b |- top & b
             (topR ; b |- top)
             (id@0 ; b |- b)))",
    );
    let out = to_uniform(&p).unwrap();
    check_full(&out.proof).unwrap();
    assert_eq!(out.proof.rule, Rule::WithR);
    assert_eq!(out.proof.premises[0].rule, Rule::TopR);
    assert_eq!(out.proof.premises[1].rule, Rule::WithL2);
}

#[test]
fn side_premise_is_weakened_under_imp_right() {
    let p = proof(
        "(lolliL@0 ; p -o q, p |- r => q
           (id@0 ; p |- p)
           (impR ; q |- r => q
             (id@0 r ; q |- q)))",
    );
    let out = to_uniform(&p).unwrap();
    check_full(&out.proof).unwrap();
    let side = &out.proof.premises[0].premises[0];
    assert_eq!(side.conclusion.gamma.len(), 1);
}

#[test]
fn clashing_eigenvariable_is_renamed() {
    let src = "sig p : i -> o.
        (lolliL@0 ; p $1:i -o q, p $1:i |- all x : i. q
          (id@0 ; p $1:i |- p $1:i)
          (forallR ; q |- all x : i. q [$1:i]
            (id@0 ; q |- q)))";
    let p = proof(src);
    let out = to_uniform(&p).unwrap();
    check_full(&out.proof).unwrap();
    assert_eq!(out.proof.rule, Rule::ForallR);
    assert_ne!(out.proof.witness.as_ref().unwrap().to_string(), "$1:i");
}

#[test]
fn forward_chaining_becomes_backward_chaining() {
    let out = to_simple(&proof(FORWARD)).unwrap();
    assert!(is_simple(&out.proof));
    assert_eq!(out.proof, proof(BACKWARD));
    assert_eq!(out.trace, vec!["lolliL/lolliL@root"]);
}

#[test]
fn simple_proof_is_a_fixpoint() {
    let p = proof(BACKWARD);
    let out = to_simple(&p).unwrap();
    assert_eq!(out.proof, p);
    assert!(out.trace.is_empty());
    assert!(to_coincided(&p).unwrap().trace.is_empty());
}

#[test]
fn lolli_left_below_lolli_left_is_permuted() {
    // The lower rule's product p4 feeds the left premise of the upper one.
    let p = proof(
        "(lolliL@0 ; p3 -o p4, p4 -o p1, p1 -o a, p3 |- a
           (id@0 ; p3 |- p3)
           (lolliL@1 ; p4 -o p1, p1 -o a, p4 |- a
             (lolliL@0 ; p4 -o p1, p4 |- p1
               (id@0 ; p4 |- p4)
               (id@0 ; p1 |- p1))
             (id@0 ; a |- a)))",
    );
    assert!(is_uniform(&p) && !is_simple(&p));
    let out = to_simple(&p).unwrap();
    check_full(&out.proof).unwrap();
    assert!(is_simple(&out.proof));
    assert!(out.proof.same_conclusion(&p));
}

#[test]
fn detached_absorb_moves_up_to_its_use() {
    let p = proof(
        "(absorb@0 a ; a -o c |- c
           (lolliL@0 a ; a -o c, a |- c
             (id@0 a ; a |- a)
             (id@0 a ; c |- c)))",
    );
    assert!(is_simple(&p) && !is_coincided(&p));
    let out = to_coincided(&p).unwrap();
    let expected = proof(
        "(lolliL@0 a ; a -o c |- c
           (absorb@0 a ; |- a
             (id@0 a ; a |- a))
           (id@0 a ; c |- c))",
    );
    assert_eq!(out.proof, expected);
    assert_eq!(out.trace, vec!["absorb/lolliL@root"]);
}

#[test]
fn two_stacked_absorbs_both_coincide() {
    let p = proof(
        "(absorb@0 a, b ; a -o b -o c |- c
           (absorb@1 a, b ; a -o b -o c, a |- c
             (lolliL@0 a, b ; a -o b -o c, a, b |- c
               (id@0 a, b ; a |- a)
               (lolliL@1 a, b ; b, b -o c |- c
                 (id@0 a, b ; b |- b)
                 (id@0 a, b ; c |- c)))))",
    );
    assert!(is_simple(&p));
    let out = to_coincided(&p).unwrap();
    check_full(&out.proof).unwrap();
    assert!(is_coincided(&out.proof));
    let absorbed: Vec<String> = {
        let mut v = Vec::new();
        out.proof.visit(&mut |_, t| {
            if t.rule == Rule::Absorb {
                v.push(t.principal_formula().unwrap().to_string());
            }
        });
        v
    };
    assert_eq!(absorbed, vec!["a", "b"]);
}

#[test]
fn backward_chaining_proof_collapses() {
    let reduced = to_reduced(&proof(BACKWARD)).unwrap();
    check_reduced(&reduced).unwrap();
    let expected = parse_proof(
        "(BCb@1 a1 ; a1 -o a2, a2 -o a3 |- a3 { | a2 | a3}
           (BCb@0 a1 ; a1 -o a2 |- a2 { | a1 | a2}
             (BCu@0 a1 ; |- a1 { | | a1})))",
        &mut Signature::new(),
    )
    .unwrap();
    assert_eq!(reduced, expected);
}

#[test]
fn id_collapses_to_backchaining_on_bounded_atom() {
    let reduced = to_reduced(&proof("(id@0 ; a |- a)")).unwrap();
    assert_eq!(reduced.rule, Rule::BCb);
    assert_eq!(reduced.triple.as_ref().unwrap().to_string(), " |  | a");
    check_reduced(&reduced).unwrap();
}

#[test]
fn reduced_input_is_rejected() {
    let reduced = to_reduced(&proof(BACKWARD)).unwrap();
    assert_eq!(to_reduced(&reduced).unwrap_err(), NormalizeError::Precondition("coincided"));
    assert_eq!(to_reduced(&proof(FORWARD)).unwrap_err(), NormalizeError::Precondition("coincided"));
}

#[test]
fn full_pipeline_on_bundled_proofs() {
    for src in [NONUNIFORM, UNIFORM, FORWARD, BACKWARD] {
        let p = proof(src);
        let out = normalize(&p, Stage::Reduced).unwrap();
        check_reduced(&out.proof).unwrap();
        assert!(out.proof.same_conclusion(&p));
    }
}

#[test]
fn quantified_clauses_collapse_with_their_instances() {
    let src = "sig p : nat -> o.
        (absorb@0 all x : nat. p x ; |- p 4
          (forallL@0 all x : nat. p x ; all x : nat. p x |- p 4 [4]
            (id@0 all x : nat. p x ; p 4 |- p 4)))";
    let reduced = normalize(&proof(src), Stage::Reduced).unwrap().proof;
    check_reduced(&reduced).unwrap();
    assert_eq!(reduced.rule, Rule::BCu);
}
