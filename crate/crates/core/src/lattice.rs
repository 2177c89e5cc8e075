//! Plumbing graphs and exact linear algebra over their intersection lattice.
//!
//! Matrices are indexed by ascending vertex id. Every computation here is
//! exact: integers are promoted to [`BigInt`] / [`BigRational`] before any
//! elimination step.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A weighted vertex of a plumbing graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: i64,
    pub weight: i64,
}

/// A weighted tree. Vertices are kept sorted by id; edges are stored as
/// pairs of positions into that sorted list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl PlumbingGraph {
    /// Builds a graph from vertex and edge lists (edges given by vertex id).
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(i64, i64)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut vertices = vertices;
        vertices.sort_by_key(|v| v.id);
        for pair in vertices.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::InvalidGraph(format!(
                    "vertex id {} is not distinct",
                    pair[0].id
                )));
            }
        }
        let index: BTreeMap<i64, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i))
            .collect();

        let n = vertices.len();
        if edges.len() != n - 1 {
            return Err(Error::InvalidGraph(format!(
                "not a tree: {} edges for {} vertices (|E| must be |V| - 1)",
                edges.len(),
                n
            )));
        }

        let mut seen = BTreeSet::new();
        let mut idx_edges = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::InvalidGraph(format!("edge refers to unknown vertex {a}")))?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::InvalidGraph(format!("edge refers to unknown vertex {b}")))?;
            if ia == ib {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            idx_edges.push(key);
            adjacency[ia].push(ib);
            adjacency[ib].push(ia);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }

        // |E| = |V| - 1 plus connectivity rules out cycles.
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !visited[w] {
                    visited[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(Error::InvalidGraph(
                "not a tree: graph is disconnected (contains a cycle)".into(),
            ));
        }

        idx_edges.sort_unstable();
        Ok(Self {
            vertices,
            edges: idx_edges,
            adjacency,
        })
    }

    /// A single vertex with the given weight and id 0.
    pub fn single(weight: i64) -> Self {
        Self::new(vec![Vertex { id: 0, weight }], vec![]).expect("one vertex is a tree")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges as sorted position pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as id pairs, smaller id first.
    pub fn edge_ids(&self) -> Vec<(i64, i64)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a].id, self.vertices[b].id))
            .collect()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.weight).collect()
    }

    pub fn index_of(&self, id: i64) -> Option<usize> {
        self.vertices.binary_search_by_key(&id, |v| v.id).ok()
    }

    pub fn id_at(&self, index: usize) -> i64 {
        self.vertices[index].id
    }

    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adjacency[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adjacency[index].len()
    }

    /// Copy of the graph with the weight at `index` replaced.
    pub fn with_weight(&self, index: usize, weight: i64) -> Self {
        let mut out = self.clone();
        out.vertices[index].weight = weight;
        out
    }
}

/// Symmetric integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymIntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl SymIntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .take(self.n)
            .collect()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `x^T M y` over i64 with overflow checks.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        let mut acc: i64 = 0;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let mut row: i64 = 0;
            for j in 0..self.n {
                let t = self
                    .get(i, j)
                    .checked_mul(y[j])
                    .ok_or(Error::Overflow("bilinear form"))?;
                row = row.checked_add(t).ok_or(Error::Overflow("bilinear form"))?;
            }
            let t = row
                .checked_mul(x[i])
                .ok_or(Error::Overflow("bilinear form"))?;
            acc = acc.checked_add(t).ok_or(Error::Overflow("bilinear form"))?;
        }
        Ok(acc)
    }

    /// `<x, E_v>`: the v-th entry of `M x`.
    pub fn row_dot(&self, v: usize, x: &[i64]) -> i64 {
        let row = &self.entries[v * self.n..(v + 1) * self.n];
        row.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| BigRational::from_integer(BigInt::from(self.get(i, j))))
                    .collect()
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }
}

impl fmt::Display for SymIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Square matrix of exact rationals, entries in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| BigRational::from_integer(x.into())));
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    /// Entries as integers when every entry is integral.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let q = self.get(i, j);
                        if q.is_integer() {
                            q.to_integer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `self * m` against an integer matrix.
    pub fn mul_int(&self, m: &SymIntMatrix) -> Result<RationalMatrix> {
        if m.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: m.dim(),
            });
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * BigRational::from_integer(m.get(k, j).into());
                }
                entries.push(acc);
            }
        }
        Ok(RationalMatrix { n, entries })
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let q = self.get(i, j);
                if i == j {
                    q.is_one()
                } else {
                    q.is_zero()
                }
            })
        })
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        let rows: Vec<Vec<BigRational>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        gauss_jordan_inverse(rows)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let cells: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

fn gauss_jordan_inverse(mut a: Vec<Vec<BigRational>>) -> Result<RationalMatrix> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Singular { det: "0".into() })?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = &factor * &a[col][j];
                a[r][j] -= t;
                let t = &factor * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Ok(RationalMatrix {
        n,
        entries: inv.into_iter().flatten().collect(),
    })
}

/// Verdict of the exact definiteness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    NegativeDefinite,
    Other,
}

/// Intersection lattice of a plumbing: weights on the diagonal, 1 on edges.
pub fn intersection_form(graph: &PlumbingGraph) -> SymIntMatrix {
    let n = graph.len();
    let mut entries = vec![0i64; n * n];
    for (i, v) in graph.vertices().iter().enumerate() {
        entries[i * n + i] = v.weight;
    }
    for &(a, b) in graph.edges() {
        entries[a * n + b] = 1;
        entries[b * n + a] = 1;
    }
    SymIntMatrix { n, entries }
}

/// Rational LDL^T pivots without row exchanges; stops at the first
/// non-negative pivot.
pub fn definiteness(m: &SymIntMatrix) -> Definiteness {
    let n = m.dim();
    let mut a = m.to_rational();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.is_negative() {
            return Definiteness::Other;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in k..n {
                let t = &factor * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    Definiteness::NegativeDefinite
}

/// Exact inverse of an integer matrix.
pub fn inverse_exact(m: &SymIntMatrix) -> Result<RationalMatrix> {
    let det = m.determinant();
    if det.is_zero() {
        return Err(Error::Singular { det: "0".into() });
    }
    gauss_jordan_inverse(m.to_rational())
}

/// `left^T * minv * right`, exactly.
pub fn pairing(left: &[i64], minv: &RationalMatrix, right: &[i64]) -> Result<BigRational> {
    let n = minv.dim();
    for len in [left.len(), right.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    let mut acc = BigRational::zero();
    for (i, &l) in left.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let mut row = BigRational::zero();
        for (j, &r) in right.iter().enumerate() {
            if r != 0 {
                row += minv.get(i, j) * BigRational::from_integer(r.into());
            }
        }
        acc += row * BigRational::from_integer(l.into());
    }
    Ok(acc)
}

/// Integer vector satisfying `k_v = <E_v, E_v> (mod 2)` for every basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharVector {
    k: Vec<i64>,
}

impl CharVector {
    pub fn new(k: Vec<i64>, form: &SymIntMatrix) -> Result<Self> {
        if k.len() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                actual: k.len(),
            });
        }
        for (v, &kv) in k.iter().enumerate() {
            if (kv - form.get(v, v)).rem_euclid(2) != 0 {
                return Err(Error::InvalidGraph(format!(
                    "vector is not characteristic at coordinate {v}"
                )));
            }
        }
        Ok(Self { k })
    }

    /// The canonical class: `<K, E_v> = -<E_v, E_v> - 2`.
    pub fn canonical(form: &SymIntMatrix) -> Self {
        Self {
            k: form.diagonal().iter().map(|e| -e - 2).collect(),
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.k
    }

    /// `k + 2 (M e_v)`, i.e. `k + 2 E_v` in the dual lattice.
    pub fn shift_by_basis(&self, v: usize, form: &SymIntMatrix) -> Self {
        let k = self
            .k
            .iter()
            .enumerate()
            .map(|(u, &ku)| ku + 2 * form.get(u, v))
            .collect();
        Self { k }
    }

    pub fn negated(&self) -> Self {
        Self {
            k: self.k.iter().map(|x| -x).collect(),
        }
    }

    /// `k^T M^{-1} k`, the square of the class.
    pub fn square(&self, form_inverse: &RationalMatrix) -> Result<BigRational> {
        pairing(&self.k, form_inverse, &self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_2_3_13() -> PlumbingGraph {
        PlumbingGraph::new(
            vec![
                Vertex { id: 0, weight: -1 },
                Vertex { id: 1, weight: -2 },
                Vertex { id: 2, weight: -3 },
                Vertex { id: 3, weight: -7 },
                Vertex { id: 4, weight: -2 },
            ],
            vec![(0, 1), (0, 2), (0, 3), (3, 4)],
        )
        .unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn single_vertex_form() {
        let m = intersection_form(&PlumbingGraph::single(-1));
        assert_eq!(m.rows(), vec![vec![-1]]);
    }

    #[test]
    fn edge_form() {
        let g = PlumbingGraph::new(
            vec![Vertex { id: 0, weight: -2 }, Vertex { id: 1, weight: -2 }],
            vec![(0, 1)],
        )
        .unwrap();
        assert_eq!(intersection_form(&g).rows(), vec![vec![-2, 1], vec![1, -2]]);
    }

    #[test]
    fn star_form_diagonal_and_edges() {
        let m = intersection_form(&star_2_3_13());
        assert_eq!(m.diagonal(), vec![-1, -2, -3, -7, -2]);
        for (i, j) in [(0, 1), (0, 2), (0, 3), (3, 4)] {
            assert_eq!(m.get(i, j), 1);
            assert_eq!(m.get(j, i), 1);
        }
        assert_eq!(m.get(1, 2), 0);
        assert_eq!(m.determinant().abs(), BigInt::one());
    }

    #[test]
    fn vertex_order_follows_ids() {
        let g = PlumbingGraph::new(
            vec![Vertex { id: 7, weight: -3 }, Vertex { id: 2, weight: -5 }],
            vec![(7, 2)],
        )
        .unwrap();
        assert_eq!(intersection_form(&g).diagonal(), vec![-5, -3]);
    }

    #[test]
    fn rejects_non_trees() {
        let v = |id| Vertex { id, weight: -2 };
        let cycle = PlumbingGraph::new(vec![v(0), v(1), v(2)], vec![(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(cycle, Err(Error::InvalidGraph(msg)) if msg.contains("|E|")));
        let disconnected =
            PlumbingGraph::new(vec![v(0), v(1), v(2), v(3)], vec![(0, 1), (1, 0), (2, 3)]);
        assert!(disconnected.is_err());
        let cyc_plus_isolated =
            PlumbingGraph::new(vec![v(0), v(1), v(2), v(3)], vec![(0, 1), (1, 2), (2, 0)]);
        assert!(
            matches!(cyc_plus_isolated, Err(Error::InvalidGraph(msg)) if msg.contains("disconnected"))
        );
        let dup = PlumbingGraph::new(vec![v(0), v(0)], vec![(0, 0)]);
        assert!(matches!(dup, Err(Error::InvalidGraph(msg)) if msg.contains("distinct")));
    }

    #[test]
    fn definiteness_small_cases() {
        let m = |rows: &[Vec<i64>]| SymIntMatrix::from_rows(rows).unwrap();
        assert_eq!(
            definiteness(&m(&[vec![-1]])),
            Definiteness::NegativeDefinite
        );
        assert_eq!(definiteness(&m(&[vec![0]])), Definiteness::Other);
        assert_eq!(
            definiteness(&m(&[vec![-1, 1], vec![1, -1]])),
            Definiteness::Other
        );
        assert_eq!(
            definiteness(&intersection_form(&star_2_3_13())),
            Definiteness::NegativeDefinite
        );
    }

    #[test]
    fn inverse_of_identity_and_singular() {
        let id = SymIntMatrix::identity(3);
        assert!(inverse_exact(&id).unwrap().is_identity());
        let zero = SymIntMatrix::from_rows(&[vec![0]]).unwrap();
        assert_eq!(
            inverse_exact(&zero),
            Err(Error::Singular { det: "0".into() })
        );
    }

    #[test]
    fn inverse_of_surgery_matrix_is_displayed_matrix() {
        // Lambda obtained by inverting the printed m = 3 inverse (det -1).
        let lambda =
            SymIntMatrix::from_rows(&[vec![-3, 2, 0], vec![2, -2, 1], vec![0, 1, -2]]).unwrap();
        let inv = inverse_exact(&lambda).unwrap();
        assert_eq!(
            inv.to_integer_rows().unwrap(),
            vec![vec![-3, -4, -2], vec![-4, -6, -3], vec![-2, -3, -2]]
        );
        assert!(inv.mul_int(&lambda).unwrap().is_identity());
    }

    #[test]
    fn pairing_fixtures() {
        let m3 = RationalMatrix::from_integer_rows(&[
            vec![-3, -4, -2],
            vec![-4, -6, -3],
            vec![-2, -3, -2],
        ])
        .unwrap();
        assert_eq!(pairing(&[1, -1, 0], &m3, &[1, -1, 0]).unwrap(), q(-1));
        assert_eq!(pairing(&[1, -1, 0], &m3, &[-1, 0, 0]).unwrap(), q(-1));
        assert_eq!(pairing(&[0, 0, 0], &m3, &[5, 1, 2]).unwrap(), q(0));

        let m4 = RationalMatrix::from_integer_rows(&[
            vec![-4, -5, -6, -3],
            vec![-5, -7, -8, -4],
            vec![-6, -8, -10, -5],
            vec![-3, -4, -5, -3],
        ])
        .unwrap();
        assert_eq!(pairing(&[-2, 0, 1, 0], &m4, &[-2, 0, 1, 0]).unwrap(), q(-2));
        assert!(matches!(
            pairing(&[1, 2], &m4, &[1, 2, 3, 4]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn canonical_class_is_characteristic() {
        let m = intersection_form(&star_2_3_13());
        let k = CharVector::canonical(&m);
        assert!(CharVector::new(k.values().to_vec(), &m).is_ok());
        let moved = k.shift_by_basis(3, &m);
        assert!(CharVector::new(moved.values().to_vec(), &m).is_ok());
        assert!(CharVector::new(vec![0, 0, 0, 0, 0], &m).is_err());
    }

    #[test]
    fn rational_inverse_round_trip() {
        let m = SymIntMatrix::from_rows(&[vec![-2, 1], vec![1, -3]]).unwrap();
        let inv = inverse_exact(&m).unwrap();
        assert_eq!(
            *inv.get(0, 0),
            BigRational::new(BigInt::from(-3), BigInt::from(5))
        );
        assert!(inv.mul_int(&m).unwrap().is_identity());
        assert!(inv.inverse().unwrap().to_integer_rows().unwrap() == m.rows());
    }
}
