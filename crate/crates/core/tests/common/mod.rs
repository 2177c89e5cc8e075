//! Generators and property checks shared by the property suite and the
//! acceptance run. Every check uses a deterministic RNG.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use plumbhf::lattice::{
    definiteness, intersection_form, inverse_exact, pairing, Definiteness, PlumbingGraph,
    SymIntMatrix, Vertex,
};
use plumbhf::obstruction::{adjunction_filter, candidate_classes, F2Class, ObstructionContext};
use plumbhf::oracle::{oracle_graded_root, LatticeBox, DEFAULT_MAX_LATTICE_POINTS};
use plumbhf::root::{
    canonical_basis, graded_root, is_almost_rational, symmetric_label, tau_sequence_auto,
    BasisElement, CanonicalBasis, JSource,
};
use plumbhf::seifert::{brieskorn_graph, euler_number, expected_euler, neg_cont_frac};
use plumbhf::tau::{tau_pair, Framing, SurgeryPresentation};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const CASES: u32 = 128;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn run<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String>
where
    S::Value: std::fmt::Debug,
{
    runner(CASES)
        .run(&strategy, test)
        .map(|()| CASES)
        .map_err(|e| e.to_string())
}

pub fn star(center: i64, legs: &[Vec<i64>]) -> PlumbingGraph {
    let mut vertices = vec![Vertex {
        id: 0,
        weight: center,
    }];
    let mut edges = Vec::new();
    let mut next = 1;
    for leg in legs {
        let mut prev = 0;
        for &w in leg {
            vertices.push(Vertex {
                id: next,
                weight: w,
            });
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    PlumbingGraph::new(vertices, edges).unwrap()
}

/// 3-legged stars with weights in [-5, -1], biased towards central -1 and -2
/// so that many roots branch.
pub fn star_strategy() -> impl Strategy<Value = (i64, Vec<Vec<i64>>)> {
    (
        prop_oneof![4 => Just(-1i64), 2 => Just(-2i64), 1 => -5i64..=-3],
        prop::collection::vec(prop::collection::vec(-5i64..=-1, 1..=3), 3),
    )
}

/// Random trees with weights at most `-(degree + 1)`, hence negative definite.
pub fn tree_strategy() -> impl Strategy<Value = PlumbingGraph> {
    (1usize..=6)
        .prop_flat_map(|n| {
            (
                (0..n).map(|i| 0..i.max(1)).collect::<Vec<_>>(),
                prop::collection::vec(0i64..=3, n),
            )
        })
        .prop_map(|(parents, extra)| {
            let n = extra.len();
            let edges: Vec<(i64, i64)> = (1..n).map(|i| (parents[i] as i64, i as i64)).collect();
            let mut degree = vec![0i64; n];
            for &(a, b) in &edges {
                degree[a as usize] += 1;
                degree[b as usize] += 1;
            }
            let vertices = (0..n)
                .map(|i| Vertex {
                    id: i as i64,
                    weight: -(degree[i] + 1) - extra[i],
                })
                .collect();
            PlumbingGraph::new(vertices, edges).unwrap()
        })
}

/// Outcome of the random-star oracle comparison.
pub struct StarReport {
    pub checked: usize,
    pub branched: usize,
}

/// Compares the tau-sequence root with the lattice oracle on random
/// negative-definite stars until `want` instances are checked.
pub fn random_stars_against_oracle(want: usize) -> Result<StarReport, String> {
    let mut runner = runner(1);
    let strategy = star_strategy();
    let (mut checked, mut branched, mut attempts) = (0, 0, 0);
    while checked < want && attempts < 5000 {
        attempts += 1;
        let (c, legs) = strategy.new_tree(&mut runner).unwrap().current();
        let g = star(c, &legs);
        if definiteness(&intersection_form(&g)) != Definiteness::NegativeDefinite {
            continue;
        }
        let v0 = is_almost_rational(&g)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("star {c} {legs:?} not almost rational"))?;
        let t = tau_sequence_auto(&g, v0, 1 << 16).map_err(|e| e.to_string())?;
        let r = graded_root(&t, &g).map_err(|e| e.to_string())?;
        let b = LatticeBox::canonical(&g).map_err(|e| e.to_string())?;
        let o = match oracle_graded_root(&g, &b.widened(1), None, DEFAULT_MAX_LATTICE_POINTS) {
            Ok(o) => o,
            Err(plumbhf::Error::BoxTooLarge { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let tight = oracle_graded_root(&g, &b, None, DEFAULT_MAX_LATTICE_POINTS)
            .map_err(|e| e.to_string())?;
        if !tight.is_isomorphic(&o) {
            return Err(format!("star {c} {legs:?}: oracle depends on the box"));
        }
        if !r.is_isomorphic(&o) {
            return Err(format!(
                "star {c} {legs:?}: tau {} vs oracle {}",
                r.canonical_form(),
                o.canonical_form()
            ));
        }
        let basis = canonical_basis(&r);
        if !(basis.is_involution() && basis.preserves_gradings()) {
            return Err(format!("star {c} {legs:?}: J is not a graded involution"));
        }
        if r.leaf_count() > 1 {
            branched += 1;
        }
        checked += 1;
    }
    Ok(StarReport { checked, branched })
}

pub fn check_pairing_bilinearity() -> Result<u32, String> {
    let strategy = tree_strategy().prop_flat_map(|g| {
        let n = g.len();
        let v = move || prop::collection::vec(-5i64..=5, n);
        (Just(g), v(), v(), v(), -4i64..=4)
    });
    run(strategy, |(g, a, b, c, s)| {
        let minv = inverse_exact(&intersection_form(&g)).unwrap();
        let p = |x: &[i64], y: &[i64]| pairing(x, &minv, y).unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let scaled: Vec<i64> = a.iter().map(|x| s * x).collect();
        prop_assert_eq!(p(&sum, &c), p(&a, &c) + p(&b, &c));
        prop_assert_eq!(p(&scaled, &c), p(&a, &c) * q(s));
        prop_assert_eq!(p(&a, &c), p(&c, &a));
        Ok(())
    })
}

/// Symmetric framings with diagonal `tb - 1`, plus rotation and linking data.
pub fn presentation_strategy() -> impl Strategy<Value = SurgeryPresentation> {
    (1usize..=4)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-4i64..=0, n),
                prop::collection::vec(-2i64..=2, n * (n - 1) / 2),
                prop::collection::vec(-3i64..=3, n),
                prop::collection::vec(-3i64..=3, n),
                -5i64..=1,
            )
        })
        .prop_filter_map("singular framing", |(tb, upper, rot, linking, knot_tb)| {
            let n = tb.len();
            let mut rows = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                rows[i][i] = tb[i] - 1;
                for j in i + 1..n {
                    let v = it.next().unwrap();
                    rows[i][j] = v;
                    rows[j][i] = v;
                }
            }
            let m = SymIntMatrix::from_rows(&rows).ok()?;
            SurgeryPresentation::new(Framing::Lambda(m), tb, rot, linking, knot_tb).ok()
        })
}

pub fn check_tau_sum_identity() -> Result<u32, String> {
    run(presentation_strategy(), |p| {
        let pair = tau_pair(&p);
        let expected = q(p.knot_tb) - p.linking_square() + BigRational::one();
        prop_assert_eq!(&pair.tau_plus + &pair.tau_minus, expected);
        Ok(())
    })
}

pub fn check_rot_negation_swaps() -> Result<u32, String> {
    run(presentation_strategy(), |p| {
        let pair = tau_pair(&p);
        let neg = p.with_rot(p.rot.iter().map(|r| -r).collect()).unwrap();
        let swapped = tau_pair(&neg);
        prop_assert_eq!(&swapped.tau_plus, &pair.tau_minus);
        prop_assert_eq!(&swapped.tau_minus, &pair.tau_plus);
        prop_assert_eq!(swapped.as_set(), pair.as_set());
        Ok(())
    })
}

/// Basis of odd size `t` with J reversing the order and each J-pair at
/// grading 0 or 2; the fixed middle element sits at grading 0.
pub fn basis_strategy() -> impl Strategy<Value = CanonicalBasis> {
    prop_oneof![Just(1usize), Just(3usize), Just(5usize), Just(7usize)]
        .prop_flat_map(|t| (Just(t), prop::collection::vec(prop::bool::ANY, t / 2)))
        .prop_map(|(t, lifted)| {
            let elements = (0..t)
                .map(|p| {
                    let pair = p.min(t - 1 - p);
                    let up = pair < t / 2 && lifted[pair];
                    BasisElement {
                        label: symmetric_label(p, t),
                        grading: q(if up { 2 } else { 0 }),
                        anchor: p,
                    }
                })
                .collect();
            CanonicalBasis {
                elements,
                j_action: (0..t).rev().collect(),
                j_source: JSource::PlanarMirror,
            }
        })
}

/// All J-invariant classes at `grading` pairing oddly with Theta+, by
/// exhaustive search over subsets.
pub fn brute_force_candidates(
    ctx: &ObstructionContext,
    grading: &BigRational,
) -> BTreeSet<Vec<usize>> {
    let t = ctx.basis.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << t) {
        let support: Vec<usize> = (0..t).filter(|&p| mask >> p & 1 == 1).collect();
        if support
            .iter()
            .any(|&p| ctx.basis.elements[p].grading != *grading)
        {
            continue;
        }
        let class = F2Class {
            support,
            grading: grading.clone(),
        };
        if ctx.is_j_invariant(&class) && class.pairing(&ctx.theta_plus) == 1 {
            out.insert(class.support);
        }
    }
    out
}

pub fn check_candidate_counts() -> Result<u32, String> {
    run(basis_strategy(), |basis| {
        let ctx = ObstructionContext::new(basis).unwrap();
        let zero = q(0);
        let t = ctx.basis.len();
        let pairs_at_zero = (0..t / 2)
            .filter(|&p| ctx.basis.elements[p].grading == zero)
            .count();
        let cands = candidate_classes(&ctx, &zero).unwrap();
        prop_assert_eq!(cands.len(), 1usize << pairs_at_zero);
        let found: BTreeSet<Vec<usize>> = cands.iter().map(|c| c.support.clone()).collect();
        prop_assert_eq!(found.len(), cands.len());
        prop_assert_eq!(found, brute_force_candidates(&ctx, &zero));
        Ok(())
    })
}

pub fn check_filter_laws() -> Result<u32, String> {
    let strategy = (
        basis_strategy(),
        any::<u64>(),
        (-2i64..=3, -2i64..=3),
        -1i64..=3,
    );
    run(strategy, |(basis, pick, (t0, t1), g4)| {
        let ctx = ObstructionContext::new(basis).unwrap();
        let all = candidate_classes(&ctx, &q(0)).unwrap();
        let input: Vec<F2Class> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> (i % 64) & 1 == 1)
            .map(|(_, c)| c.clone())
            .collect();
        let set = [q(t0.min(t1)), q(t0.max(t1))];
        let once = adjunction_filter(&input, &set, g4, &ctx);
        prop_assert!(once.iter().all(|c| input.contains(c)));
        prop_assert_eq!(adjunction_filter(&once, &set, g4, &ctx), once.clone());
        let looser = adjunction_filter(&input, &set, g4 + 1, &ctx);
        prop_assert!(once.iter().all(|c| looser.contains(c)));
        // Filtering a sublist agrees with restricting the filtered list.
        let full = adjunction_filter(&all, &set, g4, &ctx);
        let restricted: Vec<F2Class> = full.into_iter().filter(|c| input.contains(c)).collect();
        prop_assert_eq!(once, restricted);
        Ok(())
    })
}

pub fn check_continued_fraction_round_trip() -> Result<u32, String> {
    let strategy = (2i64..=10_000)
        .prop_flat_map(|p| (Just(p), 1..p))
        .prop_filter("coprime", |(p, q)| num_integer::gcd(*p, *q) == 1);
    run(strategy, |(p, qq)| {
        let cf = neg_cont_frac(p, qq).unwrap();
        prop_assert!(cf.entries.iter().all(|&x| x >= 2));
        prop_assert_eq!(cf.evaluate(), (p, qq));
        Ok(())
    })
}

pub fn brieskorn_triple_strategy() -> impl Strategy<Value = (i64, i64, i64)> {
    (2i64..=40, 2i64..=40, 2i64..=40).prop_filter(
        "pairwise coprime, product <= 10^4",
        |&(a, b, c)| {
            use num_integer::gcd;
            gcd(a, b) == 1 && gcd(a, c) == 1 && gcd(b, c) == 1 && a * b * c <= 10_000
        },
    )
}

pub fn check_brieskorn_euler_and_det() -> Result<u32, String> {
    run(brieskorn_triple_strategy(), |(a, b, c)| {
        let g = brieskorn_graph(a, b, c).unwrap();
        prop_assert_eq!(euler_number(&g, 0).unwrap(), expected_euler(a, b, c));
        let form = intersection_form(&g);
        prop_assert_eq!(form.determinant().abs(), BigInt::one());
        prop_assert_eq!(definiteness(&form), Definiteness::NegativeDefinite);
        Ok(())
    })
}
