//! Normalizer invariants on brute-force proofs.

mod common;

use common::bruteforce::{Prover, Search, SequentGen};
use lolli_core::kernel::{check_full, check_reduced, is_coincided, is_simple, is_uniform, nonuniformity_measure};
use lolli_core::normalize::{normalize, to_uniform_observed, Stage};
use proptest::prelude::*;

fn brute_proof(seed: u64) -> Option<lolli_core::kernel::ProofTree> {
    match Prover::new(seed, 2000).prove(&SequentGen::new(seed).sequent(), 7) {
        Search::Found(p) => Some(p),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn each_stage_meets_its_classifier(seed in any::<u64>()) {
        let Some(p) = brute_proof(seed) else { return Ok(()) };
        for stage in [Stage::Uniform, Stage::Simple, Stage::Coincided, Stage::Reduced] {
            let out = normalize(&p, stage).unwrap().proof;
            prop_assert!(out.same_conclusion(&p));
            match stage {
                Stage::Reduced => prop_assert!(check_reduced(&out).is_ok()),
                _ => prop_assert!(check_full(&out).is_ok()),
            }
            match stage {
                Stage::Uniform => prop_assert!(is_uniform(&out)),
                Stage::Simple => prop_assert!(is_simple(&out)),
                Stage::Coincided => prop_assert!(is_coincided(&out)),
                Stage::Reduced => {}
            }
        }
    }

    #[test]
    fn uniform_stage_lowers_the_measure_each_step(seed in any::<u64>()) {
        let Some(p) = brute_proof(seed) else { return Ok(()) };
        let mut measures = vec![nonuniformity_measure(&p)];
        let out = to_uniform_observed(&p, &mut |q| measures.push(nonuniformity_measure(q))).unwrap();
        prop_assert!(measures.windows(2).all(|w| w[1] < w[0]), "{:?}", measures);
        prop_assert_eq!(*measures.last().unwrap(), 0);
        prop_assert!(is_uniform(&out.proof));
    }

    #[test]
    fn normal_forms_are_fixpoints(seed in any::<u64>()) {
        let Some(p) = brute_proof(seed) else { return Ok(()) };
        let c = normalize(&p, Stage::Coincided).unwrap().proof;
        let again = normalize(&c, Stage::Coincided).unwrap();
        prop_assert!(again.trace.is_empty());
        prop_assert_eq!(again.proof, c);
    }
}
