//! Brute-force graded root from sublevel sets of `chi` on a box of lattice
//! points. Shares nothing with the tau-sequence route except the merge-tree
//! bookkeeping and the grading shift.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{intersection_form, inverse_exact, CharVector, PlumbingGraph};
use crate::merge_tree;
use crate::root::{chi, grading_shift, GradedRoot, RootSource};

/// Default cap on the number of enumerated lattice points.
pub const DEFAULT_MAX_LATTICE_POINTS: u128 = 10_000_000;

/// Per-vertex upper bounds of the box `[0, b_v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBox {
    pub upper: Vec<i64>,
}

impl LatticeBox {
    pub fn uniform(dim: usize, radius: i64) -> Self {
        Self {
            upper: vec![radius.max(0); dim],
        }
    }

    /// The rectangle `[0, floor(Z_K)]`, `Z_K = -K` as a rational cycle,
    /// clamped at zero. Lattice cohomology for the canonical class is
    /// already supported on this rectangle.
    pub fn canonical(graph: &PlumbingGraph) -> Result<Self> {
        let form = intersection_form(graph);
        let inv = inverse_exact(&form)?;
        let k = CharVector::canonical(&form);
        let n = graph.len();
        let mut upper = Vec::with_capacity(n);
        for v in 0..n {
            // Coefficient of K on E_v is (M^{-1} k)_v.
            let mut coeff = BigRational::from_integer(0.into());
            for (u, &ku) in k.values().iter().enumerate() {
                coeff += inv.get(v, u) * BigRational::from_integer(ku.into());
            }
            let zk = -coeff;
            let floor = zk
                .floor()
                .to_integer()
                .to_i64()
                .ok_or(Error::Overflow("Z_K"))?;
            upper.push(floor.max(0));
        }
        Ok(Self { upper })
    }

    pub fn point_count(&self) -> u128 {
        self.upper.iter().map(|&b| (b as u128) + 1).product()
    }

    /// Grows every side by `margin`.
    pub fn widened(&self, margin: i64) -> Self {
        Self {
            upper: self.upper.iter().map(|b| b + margin).collect(),
        }
    }
}

/// Graded root from the sublevel components of `chi` on `lattice_box`.
///
/// Points with `chi` above `min + level_range` are dropped when a range is
/// given; the root is then flagged truncated if that disconnects the box.
pub fn oracle_graded_root(
    graph: &PlumbingGraph,
    lattice_box: &LatticeBox,
    level_range: Option<i64>,
    max_points: u128,
) -> Result<GradedRoot> {
    let n = graph.len();
    if lattice_box.upper.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: lattice_box.upper.len(),
        });
    }
    let points = lattice_box.point_count();
    if points > max_points {
        return Err(Error::BoxTooLarge {
            points,
            cap: max_points,
        });
    }
    let total = points as usize;
    let form = intersection_form(graph);
    let k = CharVector::canonical(&form);

    let sides: Vec<usize> = lattice_box.upper.iter().map(|&b| b as usize + 1).collect();
    let mut strides = vec![1usize; n];
    for v in 1..n {
        strides[v] = strides[v - 1] * sides[v - 1];
    }
    let decode = |p: usize, x: &mut [i64]| {
        for v in 0..n {
            x[v] = ((p / strides[v]) % sides[v]) as i64;
        }
    };

    const CHUNK: usize = 1 << 14;
    let weights: Vec<i64> = (0..total)
        .into_par_iter()
        .chunks(CHUNK)
        .map(|chunk| {
            let mut x = vec![0i64; n];
            chunk
                .into_iter()
                .map(|p| {
                    decode(p, &mut x);
                    chi(&form, k.values(), &x)
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?
        .into_iter()
        .flatten()
        .collect();

    let min = *weights.iter().min().expect("box is non-empty");
    let cap = level_range.map(|r| min + r);
    let tree = merge_tree::build(
        &weights,
        |p, out| {
            for v in 0..n {
                let c = (p / strides[v]) % sides[v];
                if c > 0 {
                    out.push(p - strides[v]);
                }
                if c + 1 < sides[v] {
                    out.push(p + strides[v]);
                }
            }
        },
        cap,
    );
    Ok(GradedRoot {
        tree,
        shift: grading_shift(graph)?,
        source: RootSource::Lattice { points: total },
    })
}
