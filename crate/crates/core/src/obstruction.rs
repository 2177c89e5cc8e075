//! F2 bookkeeping for the image of the generator under a homology-ball
//! cobordism map, and the verdicts it supports.
//!
//! Classes live in the span of the canonical basis `[V_i]`; functionals
//! `T_[V_i]` pair with it by `<T_[V_i], [V_j]> = delta_ij`. The contact
//! class of the Milnor fillable structure is `T_[V_t]` (the first leaf), and
//! `Theta+` is the sum of the functionals at the tower-bottom grading.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root::CanonicalBasis;

/// Citation attached when the tau set is unknown and the Seiberg-Witten
/// closure would be needed.
pub const SW_CLOSURE_CITATION: &str =
    "[MT2, Theorem 1.8]: closed by a Seiberg-Witten argument (vanishing SW^0 of E(1)); not mechanized here";

/// A homogeneous F2 class: a set of basis positions sharing one grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Class {
    pub support: Vec<usize>,
    pub grading: BigRational,
}

impl F2Class {
    pub fn contains(&self, position: usize) -> bool {
        self.support.binary_search(&position).is_ok()
    }

    /// F2 pairing with another class through the dual basis.
    pub fn pairing(&self, other: &F2Class) -> u8 {
        (self.support.iter().filter(|p| other.contains(**p)).count() % 2) as u8
    }

    fn indicator(&self, len: usize) -> Vec<bool> {
        (0..len).map(|p| self.contains(p)).collect()
    }

    pub fn render(&self, basis: &CanonicalBasis) -> String {
        if self.support.is_empty() {
            return "0".into();
        }
        self.support
            .iter()
            .map(|&p| basis.elements[p].to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionContext {
    pub basis: CanonicalBasis,
    /// Position of `[V_t]`, the leaf with `T_[V_t] = c(xi)`.
    pub contact_index: usize,
    pub theta_plus: F2Class,
}

impl ObstructionContext {
    pub fn new(basis: CanonicalBasis) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Inconsistent("empty canonical basis".into()));
        }
        let bottom = basis
            .elements
            .iter()
            .map(|e| e.grading.clone())
            .min()
            .expect("non-empty");
        let support = (0..basis.len())
            .filter(|&p| basis.elements[p].grading == bottom)
            .collect();
        Ok(Self {
            contact_index: 0,
            theta_plus: F2Class {
                support,
                grading: bottom,
            },
            basis,
        })
    }

    pub fn contact_image(&self) -> usize {
        self.basis.j_action[self.contact_index]
    }

    pub fn is_j_invariant(&self, class: &F2Class) -> bool {
        class
            .support
            .iter()
            .all(|&p| class.contains(self.basis.j_action[p]))
    }
}

/// J-invariant homogeneous classes at `grading` pairing to 1 with `Theta+`,
/// sorted lexicographically by their indicator vectors.
pub fn candidate_classes(ctx: &ObstructionContext, grading: &BigRational) -> Result<Vec<F2Class>> {
    let at_grading: Vec<usize> = (0..ctx.basis.len())
        .filter(|&p| ctx.basis.elements[p].grading == *grading)
        .collect();
    if at_grading.is_empty() {
        return Err(Error::NoBasisAtGrading(grading.to_string()));
    }
    // J-orbits among the elements at this grading.
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for &p in &at_grading {
        let j = ctx.basis.j_action[p];
        if j >= p {
            orbits.push(if j == p { vec![p] } else { vec![p, j] });
        }
    }
    let count = orbits.len();
    assert!(count < 64, "too many J-orbits to enumerate");
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << count) {
        let mut support: Vec<usize> = (0..count)
            .filter(|&o| mask >> o & 1 == 1)
            .flat_map(|o| orbits[o].iter().copied())
            .collect();
        support.sort_unstable();
        let class = F2Class {
            support,
            grading: grading.clone(),
        };
        if class.pairing(&ctx.theta_plus) == 1 {
            out.push(class);
        }
    }
    let len = ctx.basis.len();
    out.sort_by_key(|c| c.indicator(len));
    Ok(out)
}

/// Drops every candidate that pairs to 1 with both `c(xi)` and `c(xi-bar)`
/// when `max(tau_set)` exceeds the slice-genus bound.
pub fn adjunction_filter(
    candidates: &[F2Class],
    tau_set: &[BigRational; 2],
    g4_bound: i64,
    ctx: &ObstructionContext,
) -> Vec<F2Class> {
    let max_tau = tau_set.iter().max().expect("two values");
    if *max_tau <= BigRational::from_integer(g4_bound.into()) {
        return candidates.to_vec();
    }
    let (c, jc) = (ctx.contact_index, ctx.contact_image());
    candidates
        .iter()
        .filter(|theta| !(theta.contains(c) && theta.contains(jc)))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymplecticVerdict {
    Obstructed,
    NotObstructed,
    Undetermined,
}

impl fmt::Display for SymplecticVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymplecticVerdict::Obstructed => "obstructed",
            SymplecticVerdict::NotObstructed => "not_obstructed",
            SymplecticVerdict::Undetermined => "undetermined",
        })
    }
}

/// A filling would send the contact functional to 1; obstructed when no
/// surviving candidate pairs with it.
pub fn symplectic_verdict(
    remaining: &[F2Class],
    ctx: &ObstructionContext,
) -> Result<SymplecticVerdict> {
    if remaining.is_empty() {
        return Err(Error::Inconsistent(
            "every candidate class was ruled out".into(),
        ));
    }
    let with_contact = remaining
        .iter()
        .filter(|theta| theta.contains(ctx.contact_index))
        .count();
    Ok(if with_contact == 0 {
        SymplecticVerdict::Obstructed
    } else if with_contact == remaining.len() {
        SymplecticVerdict::NotObstructed
    } else {
        SymplecticVerdict::Undetermined
    })
}

/// Image of the generator under the orientation-reversed ball: `Theta+`.
pub fn reversed_orientation_class(ctx: &ObstructionContext) -> F2Class {
    ctx.theta_plus.clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExoticVerdict {
    DistinctSmoothStructures,
    Inconclusive,
}

impl fmt::Display for ExoticVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExoticVerdict::DistinctSmoothStructures => "distinct_smooth_structures",
            ExoticVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// An H-slice disk would force `max T <= g4`; a larger tau separates the
/// smooth structures.
pub fn exotic_pair_check(tau_set: &[BigRational; 2], g4_bound: i64) -> ExoticVerdict {
    let max_tau = tau_set.iter().max().expect("two values");
    if *max_tau > BigRational::from_integer(g4_bound.into()) {
        ExoticVerdict::DistinctSmoothStructures
    } else {
        ExoticVerdict::Inconclusive
    }
}

/// Verdict report, serialized as JSON by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub manifold: String,
    pub basis_size: usize,
    pub candidates: Vec<String>,
    pub filtered: Vec<String>,
    pub verdict: SymplecticVerdict,
    pub citations: Vec<String>,
    #[serde(skip)]
    pub transcript: Vec<String>,
}

/// Runs enumeration, filter and verdict. `tau_set = None` means the tau
/// set of the slice knot is unknown, so the filter cannot fire.
pub fn run_pipeline(
    manifold: &str,
    ctx: &ObstructionContext,
    tau_set: Option<&[BigRational; 2]>,
    g4_bound: i64,
    grading: &BigRational,
) -> Result<ObstructionReport> {
    let basis = &ctx.basis;
    let mut transcript = Vec::new();
    let mut citations = Vec::new();
    let names: Vec<String> = basis.elements.iter().map(|e| e.to_string()).collect();
    transcript.push(format!(
        "basis of Ker U: {{{}}}; J: {}",
        names.join(", "),
        (0..basis.len())
            .filter(|&p| basis.j_action[p] > p)
            .map(|p| format!("{} <-> {}", names[p], names[basis.j_action[p]]))
            .chain(
                (0..basis.len())
                    .filter(|&p| basis.j_action[p] == p)
                    .map(|p| format!("{} fixed", names[p]))
            )
            .collect::<Vec<_>>()
            .join(", ")
    ));
    transcript.push(format!(
        "Theta+ = {}",
        ctx.theta_plus
            .support
            .iter()
            .map(|&p| format!("T_{}", names[p]))
            .collect::<Vec<_>>()
            .join(" + ")
    ));

    let candidates = candidate_classes(ctx, grading)?;
    citations.push(
        "theta is homogeneous, J-invariant (unique Spin^c structure) and pairs to 1 with Theta+"
            .into(),
    );
    transcript.push(format!(
        "candidates at grading {grading}: {}",
        candidates
            .iter()
            .map(|c| c.render(basis))
            .collect::<Vec<_>>()
            .join(" or ")
    ));

    let filtered = match tau_set {
        Some(set) => {
            transcript.push(format!(
                "tau set {{{}, {}}}, slice genus bound g4 = {g4_bound}",
                set[0], set[1]
            ));
            let kept = adjunction_filter(&candidates, set, g4_bound, ctx);
            for c in candidates.iter().filter(|c| !kept.contains(c)) {
                transcript.push(format!(
                    "{} pairs to 1 with c(xi) and c(xi-bar), forcing max T <= g4 = {g4_bound}: contradiction",
                    c.render(basis)
                ));
            }
            if kept.len() < candidates.len() {
                citations.push("relative adjunction inequality: max T <= tau_theta <= g4".into());
            }
            kept
        }
        None => {
            transcript.push("tau set unknown: adjunction filter not applied".into());
            candidates.clone()
        }
    };

    let verdict = symplectic_verdict(&filtered, ctx)?;
    match verdict {
        SymplecticVerdict::Obstructed => {
            transcript.push(format!(
                "every remaining theta has <T_{}, theta> = 0, but a symplectic filling forces it to be 1",
                names[ctx.contact_index]
            ));
            citations.push(
                "naturality of the contact invariant under strong symplectic fillings".into(),
            );
        }
        SymplecticVerdict::NotObstructed => {
            transcript.push("every remaining theta pairs to 1 with the contact class".into());
        }
        SymplecticVerdict::Undetermined => {
            transcript.push("candidates of both kinds survive".into());
            if tau_set.is_none() {
                citations.push(SW_CLOSURE_CITATION.into());
            }
        }
    }
    transcript.push(format!("verdict: {verdict}"));

    Ok(ObstructionReport {
        manifold: manifold.to_string(),
        basis_size: basis.len(),
        candidates: candidates.iter().map(|c| c.render(basis)).collect(),
        filtered: filtered.iter().map(|c| c.render(basis)).collect(),
        verdict,
        citations,
        transcript,
    })
}

/// Grading zero: the degree shift of a cobordism with `b1 = b2 = 0`.
pub fn default_grading() -> BigRational {
    BigRational::zero()
}
