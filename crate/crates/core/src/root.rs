//! Laufer sequences, almost-rationality, tau sequences and graded roots.
//!
//! The weight function throughout is `chi(x) = -(<x,x> + <K,x>) / 2` with
//! `K` the canonical class. A root vertex at chi-level `n` carries grading
//! `2n - (K^2 + |V|)/4`; with this normalization the Poincare sphere root
//! has its single leaf at grading -2 and every S^3 presentation has d = 0.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{
    definiteness, intersection_form, inverse_exact, CharVector, Definiteness, PlumbingGraph,
    SymIntMatrix,
};
use crate::merge_tree::{self, MergeTree};
use crate::seifert::star_period;

/// Hard cap on the additions performed by a single Laufer run.
pub const LAUFER_STEP_CAP: usize = 1_000_000;

/// `chi(x) = -(<x,x> + <k,x>) / 2`.
pub fn chi(form: &SymIntMatrix, k: &[i64], x: &[i64]) -> Result<i64> {
    let xx = form.bilinear(x, x)?;
    let kx = k
        .iter()
        .zip(x)
        .try_fold(0i64, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))
        .ok_or(Error::Overflow("chi"))?;
    let total = xx.checked_add(kx).ok_or(Error::Overflow("chi"))?;
    debug_assert_eq!(total.rem_euclid(2), 0, "k must be characteristic");
    Ok(-total / 2)
}

fn require_negative_definite(form: &SymIntMatrix) -> Result<()> {
    match definiteness(form) {
        Definiteness::NegativeDefinite => Ok(()),
        Definiteness::Other => Err(Error::NotNegativeDefinite),
    }
}

/// Laufer's computation sequence: repeatedly add `E_v` while `<x, E_v> > 0`
/// for some `v` outside `frozen`. Returns the number of additions.
fn laufer_run(form: &SymIntMatrix, x: &mut [i64], frozen: Option<usize>) -> Result<usize> {
    let n = form.dim();
    let mut steps = 0usize;
    // Dot products <x, E_v> kept incrementally.
    let mut dots: Vec<i64> = (0..n).map(|v| form.row_dot(v, x)).collect();
    loop {
        let next = (0..n).find(|&v| Some(v) != frozen && dots[v] > 0);
        let Some(v) = next else { return Ok(steps) };
        x[v] += 1;
        for (u, d) in dots.iter_mut().enumerate() {
            *d += form.get(u, v);
        }
        steps += 1;
        if steps > LAUFER_STEP_CAP {
            return Err(Error::IterationCap {
                cap: LAUFER_STEP_CAP,
                context: "Laufer sequence",
            });
        }
    }
}

/// Artin fundamental cycle with its rationality verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCycle {
    pub cycle: Vec<i64>,
    pub chi: i64,
    pub rational: bool,
}

pub fn fundamental_cycle(graph: &PlumbingGraph) -> Result<FundamentalCycle> {
    let form = intersection_form(graph);
    require_negative_definite(&form)?;
    let mut x = vec![0i64; graph.len()];
    x[0] = 1;
    laufer_run(&form, &mut x, None)?;
    let k = CharVector::canonical(&form);
    let chi = chi(&form, k.values(), &x)?;
    Ok(FundamentalCycle {
        cycle: x,
        chi,
        rational: chi == 1,
    })
}

/// Weight used when probing a vertex for almost-rationality.
pub fn almost_rational_probe_weight(graph: &PlumbingGraph) -> i64 {
    let total: i64 = graph.vertices().iter().map(|v| v.weight.abs()).sum();
    -(total + graph.len() as i64 + 1)
}

fn rational_after_decrease(graph: &PlumbingGraph, index: usize) -> Result<bool> {
    let probe = graph.with_weight(index, almost_rational_probe_weight(graph));
    Ok(fundamental_cycle(&probe)?.rational)
}

/// A vertex whose weight decrease makes the graph rational, if any.
/// Vertices are tried by decreasing degree, then ascending id.
pub fn is_almost_rational(graph: &PlumbingGraph) -> Result<Option<i64>> {
    require_negative_definite(&intersection_form(graph))?;
    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(graph.degree(i)), graph.id_at(i)));
    for i in order {
        if rational_after_decrease(graph, i)? {
            return Ok(Some(graph.id_at(i)));
        }
    }
    Ok(None)
}

/// How the trailing window of a tau sequence was sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// Star graph centered at `v0`: the window is the product of the leg
    /// denominators, over which `Delta tau` grows by at least one.
    Period(usize),
    /// Any other graph: a quarter of the cutoff, not a proof.
    Heuristic(usize),
}

impl Certification {
    pub fn window(&self) -> usize {
        match *self {
            Certification::Period(w) | Certification::Heuristic(w) => w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauSequence {
    /// `tau(0), ..., tau(N)`.
    pub values: Vec<i64>,
    pub stabilized: bool,
    /// Start of the trailing run with `Delta tau >= 0`.
    pub stabilization_index: usize,
    pub certification: Certification,
    pub center: i64,
}

impl TauSequence {
    pub fn cutoff(&self) -> usize {
        self.values.len() - 1
    }

    pub fn deltas(&self) -> Vec<i64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Indices of local minima after collapsing plateaus (leftmost index of each).
    pub fn local_minima(&self) -> Vec<usize> {
        let mut reduced: Vec<(usize, usize, i64)> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            match reduced.last_mut() {
                Some(last) if last.2 == v => last.1 = i,
                _ => reduced.push((i, i, v)),
            }
        }
        let mut out = Vec::new();
        for j in 0..reduced.len() {
            let left_ok = j == 0 || reduced[j - 1].2 > reduced[j].2;
            let right_ok = j + 1 == reduced.len() || reduced[j + 1].2 > reduced[j].2;
            if left_ok && right_ok {
                out.push(reduced[j].0);
            }
        }
        out
    }
}

/// Cycles `x(0), ..., x(N)` of the generalized Laufer sequence at `v0`,
/// together with the number of additions each step needed.
pub fn generalized_laufer_cycles(
    graph: &PlumbingGraph,
    v0: i64,
    cutoff: usize,
) -> Result<(Vec<Vec<i64>>, Vec<usize>)> {
    let form = intersection_form(graph);
    let c = graph
        .index_of(v0)
        .ok_or_else(|| Error::InvalidGraph(format!("no vertex {v0}")))?;
    let mut x = vec![0i64; graph.len()];
    let mut cycles = vec![x.clone()];
    let mut steps = Vec::with_capacity(cutoff);
    for _ in 0..cutoff {
        x[c] += 1;
        steps.push(laufer_run(&form, &mut x, Some(c))?);
        cycles.push(x.clone());
    }
    Ok((cycles, steps))
}

/// tau sequence of an almost-rational graph at `v0`, up to `cutoff`.
pub fn tau_sequence(graph: &PlumbingGraph, v0: i64, cutoff: usize) -> Result<TauSequence> {
    let form = intersection_form(graph);
    require_negative_definite(&form)?;
    let c = graph
        .index_of(v0)
        .ok_or_else(|| Error::InvalidGraph(format!("no vertex {v0}")))?;
    if !rational_after_decrease(graph, c)? {
        return Err(Error::NotAlmostRational(v0));
    }

    let mut x = vec![0i64; graph.len()];
    let mut values = Vec::with_capacity(cutoff + 1);
    values.push(0i64);
    for i in 0..cutoff {
        let delta = 1 - form.row_dot(c, &x);
        let next = values[i].checked_add(delta).ok_or(Error::Overflow("tau"))?;
        values.push(next);
        if i + 1 < cutoff {
            x[c] += 1;
            laufer_run(&form, &mut x, Some(c))?;
        }
    }

    let certification = match star_period(graph, v0) {
        Some(p) => Certification::Period(p as usize),
        None => Certification::Heuristic((cutoff / 4).max(1)),
    };
    let deltas: Vec<i64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let window = certification.window();
    let stabilized = cutoff >= window && deltas[cutoff - window..].iter().all(|&d| d >= 1);
    let stabilization_index = deltas.iter().rposition(|&d| d < 0).map_or(0, |i| i + 1);
    Ok(TauSequence {
        values,
        stabilized,
        stabilization_index,
        certification,
        center: v0,
    })
}

/// Extends the cutoff until the tau sequence is certified, doubling up to `max_cutoff`.
pub fn tau_sequence_auto(graph: &PlumbingGraph, v0: i64, max_cutoff: usize) -> Result<TauSequence> {
    let mut cutoff = match star_period(graph, v0) {
        Some(p) => (2 * p as usize).max(16),
        None => 64,
    };
    loop {
        let t = tau_sequence(graph, v0, cutoff.min(max_cutoff))?;
        if t.stabilized || cutoff >= max_cutoff {
            return Ok(t);
        }
        cutoff *= 2;
    }
}

/// `(K^2 + |V|) / 4`.
pub fn grading_shift(graph: &PlumbingGraph) -> Result<BigRational> {
    let form = intersection_form(graph);
    let inv = inverse_exact(&form)?;
    let k = CharVector::canonical(&form);
    let k2 = k.square(&inv)?;
    Ok((k2 + BigRational::from_integer(BigInt::from(graph.len())))
        / BigRational::from_integer(4.into()))
}

/// Where a graded root came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSource {
    Tau { values: Vec<i64> },
    Lattice { points: usize },
}

/// A graded root stored as its compressed merge tree plus the grading shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRoot {
    pub tree: MergeTree,
    pub shift: BigRational,
    pub source: RootSource,
}

impl GradedRoot {
    pub fn grading(&self, level: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(2 * level)) - &self.shift
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaves().len()
    }

    /// Leaf gradings in planar order.
    pub fn leaf_gradings(&self) -> Vec<BigRational> {
        self.tree
            .leaf_levels()
            .into_iter()
            .map(|l| self.grading(l))
            .collect()
    }

    /// Canonical form of the level tree, prefixed with the shift.
    pub fn canonical_form(&self) -> String {
        format!("shift={};{}", self.shift, self.tree.canonical_form())
    }

    pub fn is_isomorphic(&self, other: &GradedRoot) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// Whether reversing the planar order is a graded-tree automorphism.
    pub fn is_mirror_symmetric(&self) -> bool {
        fn ordered(tree: &MergeTree, node: usize, reverse: bool) -> String {
            let n = &tree.nodes()[node];
            let mut parts: Vec<String> = n
                .children
                .iter()
                .map(|&c| ordered(tree, c, reverse))
                .collect();
            if reverse {
                parts.reverse();
            }
            format!("{}({})", n.level, parts.join(","))
        }
        let root = self.tree.root();
        ordered(&self.tree, root, false) == ordered(&self.tree, root, true)
    }
}

/// Graded root of a certified tau sequence.
pub fn graded_root(tau: &TauSequence, graph: &PlumbingGraph) -> Result<GradedRoot> {
    if !tau.stabilized {
        return Err(Error::Unstabilized {
            cutoff: tau.cutoff(),
        });
    }
    Ok(GradedRoot {
        tree: merge_tree::build_path(&tau.values),
        shift: grading_shift(graph)?,
        source: RootSource::Tau {
            values: tau.values.clone(),
        },
    })
}

/// Grading of the bottom of the infinite tower: the lowest leaf.
pub fn d_invariant(root: &GradedRoot) -> BigRational {
    let min_level = root
        .tree
        .leaf_levels()
        .into_iter()
        .min()
        .expect("a root has at least one leaf");
    root.grading(min_level)
}

/// How the conjugation action on the basis was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JSource {
    /// The plateau-collapsed tau sequence satisfies `r ↦ i_sym - r`
    /// between its first and last minima.
    TauSymmetry { i_sym: usize },
    /// The planar tree is mirror symmetric.
    PlanarMirror,
    /// No symmetry found; J acts trivially.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub label: i64,
    pub grading: BigRational,
    /// Leftmost tau index (or lattice point) of the leaf.
    pub anchor: usize,
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[V{}]", self.label)
    }
}

/// Basis of Ker U indexed `[V_t], ..., [V_0], ..., [V_-t]` in leaf order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalBasis {
    pub elements: Vec<BasisElement>,
    /// `j_action[i]` is the position of `J(elements[i])`.
    pub j_action: Vec<usize>,
    pub j_source: JSource,
}

impl CanonicalBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position_of_label(&self, label: i64) -> Option<usize> {
        self.elements.iter().position(|e| e.label == label)
    }

    pub fn is_involution(&self) -> bool {
        self.j_action
            .iter()
            .enumerate()
            .all(|(i, &j)| j < self.j_action.len() && self.j_action[j] == i)
    }

    pub fn preserves_gradings(&self) -> bool {
        self.j_action
            .iter()
            .enumerate()
            .all(|(i, &j)| self.elements[i].grading == self.elements[j].grading)
    }

    /// Builds a basis of `size` elements at grading zero with J reversing the order.
    pub fn symmetric(size: usize) -> Self {
        let elements = (0..size)
            .map(|p| BasisElement {
                label: symmetric_label(p, size),
                grading: BigRational::zero(),
                anchor: p,
            })
            .collect();
        CanonicalBasis {
            elements,
            j_action: (0..size).rev().collect(),
            j_source: JSource::PlanarMirror,
        }
    }
}

/// Label of position `p` among `t` leaves: `(t-1)/2, ..., -(t-1)/2` for odd
/// `t`; `t/2, ..., 1, -1, ..., -t/2` for even `t`.
pub fn symmetric_label(p: usize, t: usize) -> i64 {
    let (p, t) = (p as i64, t as i64);
    if t % 2 == 1 {
        (t - 1) / 2 - p
    } else {
        let l = t / 2 - p;
        if l <= 0 {
            l - 1
        } else {
            l
        }
    }
}

/// Plateau-collapsed tau values with the leftmost index of each plateau.
fn reduced(values: &[i64]) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if out.last().is_none_or(|&(_, last)| last != v) {
            out.push((i, v));
        }
    }
    out
}

/// Checks that the plateau-collapsed sequence is a palindrome between the
/// first and last minima; returns the reduced symmetry index.
fn tau_symmetry(values: &[i64], minima: &[usize]) -> Option<usize> {
    let red = reduced(values);
    let (lo, hi) = (*minima.first()?, *minima.last()?);
    let first = red.iter().position(|&(i, _)| i == lo)?;
    let last = red.iter().position(|&(i, _)| i == hi)?;
    let i_sym = first + last;
    (first..=last)
        .all(|r| red[r].1 == red[i_sym - r].1)
        .then_some(i_sym)
}

/// One basis element per leaf, ordered by leftmost local-minimum index, with
/// the conjugation action induced by the symmetry of the tau sequence.
pub fn canonical_basis(root: &GradedRoot) -> CanonicalBasis {
    let leaves = root.tree.leaves();
    let t = leaves.len();
    let elements: Vec<BasisElement> = leaves
        .iter()
        .enumerate()
        .map(|(p, &leaf)| {
            let node = &root.tree.nodes()[leaf];
            BasisElement {
                label: symmetric_label(p, t),
                grading: root.grading(node.level),
                anchor: node.anchor,
            }
        })
        .collect();

    let sym = match &root.source {
        RootSource::Tau { values } => {
            let anchors: Vec<usize> = elements.iter().map(|e| e.anchor).collect();
            tau_symmetry(values, &anchors).map(|i_sym| JSource::TauSymmetry { i_sym })
        }
        RootSource::Lattice { .. } => None,
    };
    let j_source = match sym {
        Some(s) => s,
        None if root.is_mirror_symmetric() => JSource::PlanarMirror,
        None => JSource::Trivial,
    };
    let j_action = match j_source {
        JSource::Trivial => (0..t).collect(),
        _ => (0..t).rev().collect(),
    };
    CanonicalBasis {
        elements,
        j_action,
        j_source,
    }
}
