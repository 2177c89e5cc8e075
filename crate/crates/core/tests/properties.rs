mod common;

use plumbhf::lattice::{intersection_form, inverse_exact, CharVector};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use common::*;

fn ok(r: Result<u32, String>) {
    let cases = r.unwrap_or_else(|e| panic!("{e}"));
    assert!(cases >= 100);
}

#[test]
fn pairing_is_bilinear_and_symmetric() {
    ok(check_pairing_bilinearity());
}

#[test]
fn tau_sum_identity() {
    ok(check_tau_sum_identity());
}

#[test]
fn rot_negation_swaps_tau() {
    ok(check_rot_negation_swaps());
}

#[test]
fn candidate_count_matches_exhaustive_search() {
    ok(check_candidate_counts());
}

#[test]
fn filter_is_monotone_and_idempotent() {
    ok(check_filter_laws());
}

#[test]
fn continued_fractions_round_trip() {
    ok(check_continued_fraction_round_trip());
}

#[test]
fn brieskorn_graphs_are_unimodular() {
    ok(check_brieskorn_euler_and_det());
}

#[test]
fn form_is_symmetric_with_one_entry_per_edge() {
    runner(CASES)
        .run(&tree_strategy(), |g| {
            let m = intersection_form(&g);
            let n = g.len();
            let mut off = 0;
            for i in 0..n {
                prop_assert_eq!(m.get(i, i), g.vertices()[i].weight);
                for j in 0..n {
                    prop_assert_eq!(m.get(i, j), m.get(j, i));
                    if i != j && m.get(i, j) != 0 {
                        prop_assert_eq!(m.get(i, j), 1);
                        off += 1;
                    }
                }
            }
            prop_assert_eq!(off, 2 * g.edges().len());
            Ok(())
        })
        .unwrap();
}

#[test]
fn inverse_times_form_is_identity() {
    runner(CASES)
        .run(&tree_strategy(), |g| {
            let m = intersection_form(&g);
            let inv = inverse_exact(&m).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(inv.mul_int(&m).unwrap().is_identity());
            Ok(())
        })
        .unwrap();
}

#[test]
fn canonical_class_is_characteristic() {
    let strategy = tree_strategy().prop_flat_map(|g| {
        let n = g.len();
        (Just(g), prop::collection::vec(-6i64..=6, n), 0..n)
    });
    runner(CASES)
        .run(&strategy, |(g, x, v)| {
            let m = intersection_form(&g);
            let k = CharVector::canonical(&m);
            let kx: i64 = k.values().iter().zip(&x).map(|(a, b)| a * b).sum();
            prop_assert_eq!((kx - m.bilinear(&x, &x).unwrap()).rem_euclid(2), 0);
            let shifted = k.shift_by_basis(v, &m);
            prop_assert!(CharVector::new(shifted.values().to_vec(), &m).is_ok());
            prop_assert!(CharVector::new(k.negated().values().to_vec(), &m).is_ok());
            Ok(())
        })
        .unwrap();
}
