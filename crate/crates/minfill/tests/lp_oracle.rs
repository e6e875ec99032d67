//! Simplex vs brute-force vertex enumeration on randomized small programs.

mod common;

use common::{oracle_solve, random_lp, OracleOutcome};
use minfill::lp::{self, LpConstraint, LinearProgram, LpOutcome};
use minfill::rational::rat;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_against_oracle(lp: &LinearProgram) {
    let got = lp::solve(lp).expect("well-formed program");
    let expected = oracle_solve(lp);
    match (&got, &expected) {
        (LpOutcome::Optimal { value, point }, OracleOutcome::Optimal(oracle_value)) => {
            assert_eq!(value, oracle_value, "optimal values differ for {lp:?}");
            assert!(lp.is_feasible(point), "witness infeasible for {lp:?}");
            assert_eq!(lp.evaluate_objective(point), *value, "witness misses value for {lp:?}");
        }
        (LpOutcome::Unbounded { .. }, OracleOutcome::Unbounded) => {}
        (LpOutcome::Infeasible { .. }, OracleOutcome::Infeasible) => {}
        other => panic!("classification mismatch {other:?} for {lp:?}"),
    }
}

#[test]
fn seeded_batch_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1203);
    for case in 0..60 {
        let lp = random_lp(&mut rng);
        check_against_oracle(&lp);
        let _ = case;
    }
}

fn small_lp_strategy() -> impl Strategy<Value = LinearProgram> {
    (1usize..=3, 1usize..=5).prop_flat_map(|(num_vars, num_cons)| {
        let coeff = -4i64..=4;
        let constraint = (
            prop::collection::vec(coeff.clone(), num_vars),
            -6i64..=6,
        )
            .prop_map(|(coeffs, rhs)| LpConstraint {
                coeffs: coeffs.into_iter().map(rat).collect(),
                rhs: rat(rhs),
            });
        (
            prop::collection::vec(constraint, num_cons),
            prop::collection::vec(coeff, num_vars),
            prop::collection::vec(any::<bool>(), num_vars),
        )
            .prop_map(move |(constraints, objective, nonneg)| LinearProgram {
                num_vars,
                constraints,
                objective: objective.into_iter().map(rat).collect(),
                nonneg,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn arbitrary_small_programs_match_oracle(lp in small_lp_strategy()) {
        check_against_oracle(&lp);
    }

    #[test]
    fn scaling_a_constraint_changes_nothing(lp in small_lp_strategy(), row in 0usize..5, factor in 1i64..=3) {
        prop_assume!(!lp.constraints.is_empty());
        let row = row % lp.constraints.len();
        let mut scaled = lp.clone();
        for c in &mut scaled.constraints[row].coeffs {
            *c *= rat(factor);
        }
        scaled.constraints[row].rhs *= rat(factor);
        let a = lp::solve(&lp).unwrap();
        let b = lp::solve(&scaled).unwrap();
        match (a, b) {
            (LpOutcome::Optimal { value: va, .. }, LpOutcome::Optimal { value: vb, .. }) => {
                prop_assert_eq!(va, vb);
            }
            (LpOutcome::Unbounded { .. }, LpOutcome::Unbounded { .. }) => {}
            (LpOutcome::Infeasible { .. }, LpOutcome::Infeasible { .. }) => {}
            other => prop_assert!(false, "classification changed: {:?}", other),
        }
    }
}
