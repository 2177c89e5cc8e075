//! Brieskorn triples, normalized Seifert invariants and their star-shaped
//! plumbing graphs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::{PlumbingGraph, Vertex};

/// A leg `(a, b)` with `0 < b < a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub a: i64,
    pub b: i64,
}

/// Normalized Seifert invariants `(e0; (a_i, b_i))` of a Brieskorn sphere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeifertData {
    pub e0: i64,
    pub legs: Vec<Leg>,
}

impl SeifertData {
    /// `e0 + sum b_i / a_i`.
    pub fn euler_number(&self) -> BigRational {
        self.legs
            .iter()
            .fold(BigRational::from_integer(self.e0.into()), |acc, leg| {
                acc + BigRational::new(leg.b.into(), leg.a.into())
            })
    }
}

/// Negative continued fraction `x1 - 1/(x2 - 1/(...))`, every entry at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    pub entries: Vec<i64>,
}

impl ContinuedFraction {
    /// Evaluates back to `(p, q)` in lowest terms.
    pub fn evaluate(&self) -> (i64, i64) {
        // Fold from the tail: p/q -> x - q/p.
        let mut p = 1i64;
        let mut q = 0i64;
        for &x in self.entries.iter().rev() {
            let np = x * p - q;
            q = p;
            p = np;
        }
        (p, q)
    }
}

fn check_triple(triple: [i64; 3]) -> Result<()> {
    for &a in &triple {
        if a < 2 {
            return Err(Error::InvalidSeifert(format!("exponent {a} must be > 1")));
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if triple[i].gcd(&triple[j]) != 1 {
                return Err(Error::InvalidSeifert(format!(
                    "{} and {} are not coprime",
                    triple[i], triple[j]
                )));
            }
        }
    }
    Ok(())
}

/// Seifert invariants of `Sigma(a1, a2, a3)` with `b_i (A/a_i) = -1 (mod a_i)`.
pub fn normalized_seifert(a1: i64, a2: i64, a3: i64) -> Result<SeifertData> {
    let triple = [a1, a2, a3];
    check_triple(triple)?;
    let total: i64 = triple
        .iter()
        .try_fold(1i64, |acc, &a| acc.checked_mul(a))
        .ok_or(Error::Overflow("product of exponents"))?;

    let mut legs = Vec::with_capacity(3);
    let mut sum = 0i64;
    for &a in &triple {
        let cofactor = total / a;
        // Inverse of -cofactor modulo a.
        let ext = (-cofactor).rem_euclid(a).extended_gcd(&a);
        debug_assert_eq!(ext.gcd, 1);
        let b = ext.x.rem_euclid(a);
        sum += b * cofactor;
        legs.push(Leg { a, b });
    }
    let numerator = -1 - sum;
    debug_assert_eq!(numerator % total, 0);
    Ok(SeifertData {
        e0: numerator / total,
        legs,
    })
}

/// Expansion of `p/q`, `0 < q < p`, as a negative continued fraction.
pub fn neg_cont_frac(p: i64, q: i64) -> Result<ContinuedFraction> {
    if !(0 < q && q < p) {
        return Err(Error::InvalidFraction(format!("q = {q} outside (0, {p})")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::InvalidFraction(format!(
            "{p}/{q} is not in lowest terms"
        )));
    }
    let (mut p, mut q) = (p, q);
    let mut entries = Vec::new();
    while q != 0 {
        // x = ceil(p / q); remainder r = x q - p in [0, q)
        let x = Integer::div_ceil(&p, &q);
        entries.push(x);
        let r = x * q - p;
        p = q;
        q = r;
    }
    Ok(ContinuedFraction { entries })
}

/// Star-shaped graph of `Sigma(a1, a2, a3)`.
///
/// The central vertex has id 0; the legs follow in input order, each leg's
/// vertices numbered consecutively outward from the center.
pub fn brieskorn_graph(a1: i64, a2: i64, a3: i64) -> Result<PlumbingGraph> {
    let data = normalized_seifert(a1, a2, a3)?;
    let cfs = data
        .legs
        .iter()
        .map(|leg| neg_cont_frac(leg.a, leg.b))
        .collect::<Result<Vec<_>>>()?;
    star_graph(data.e0, &cfs)
}

/// A star with the given central weight and legs of weights `-x` for each
/// continued-fraction entry `x`.
pub fn star_graph(e0: i64, legs: &[ContinuedFraction]) -> Result<PlumbingGraph> {
    let mut vertices = vec![Vertex { id: 0, weight: e0 }];
    let mut edges = Vec::new();
    let mut next = 1i64;
    for leg in legs {
        let mut prev = 0i64;
        for &x in &leg.entries {
            vertices.push(Vertex {
                id: next,
                weight: -x,
            });
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    PlumbingGraph::new(vertices, edges)
}

/// Leg weight lists of a star-shaped graph, each read outward from `center`.
pub fn star_legs(graph: &PlumbingGraph, center: i64) -> Result<Vec<Vec<i64>>> {
    let c = graph.index_of(center).ok_or(Error::NotStarShaped(center))?;
    let mut legs = Vec::new();
    for &start in graph.neighbors(c) {
        let mut leg = Vec::new();
        let (mut prev, mut cur) = (c, start);
        loop {
            leg.push(graph.vertices()[cur].weight);
            let next: Vec<usize> = graph
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&w| w != prev)
                .collect();
            match next.as_slice() {
                [] => break,
                [w] => {
                    prev = cur;
                    cur = *w;
                }
                _ => return Err(Error::NotStarShaped(center)),
            }
        }
        legs.push(leg);
    }
    Ok(legs)
}

/// Recovers `(a, b)` from a leg's weights via its continued fraction.
pub fn leg_invariants(weights: &[i64]) -> Result<Leg> {
    if weights.iter().any(|&w| w > -2) {
        return Err(Error::InvalidFraction(
            "leg weights must all be at most -2".into(),
        ));
    }
    let cf = ContinuedFraction {
        entries: weights.iter().map(|w| -w).collect(),
    };
    let (a, b) = cf.evaluate();
    Ok(Leg { a, b })
}

/// Orbifold Euler number `e0 + sum b_i / a_i` of a star-shaped graph.
pub fn euler_number(graph: &PlumbingGraph, center: i64) -> Result<BigRational> {
    let c = graph.index_of(center).ok_or(Error::NotStarShaped(center))?;
    let mut e = BigRational::from_integer(BigInt::from(graph.vertices()[c].weight));
    for leg in star_legs(graph, center)? {
        let Leg { a, b } = leg_invariants(&leg)?;
        e += BigRational::new(b.into(), a.into());
    }
    Ok(e)
}

/// Product of the leg denominators `a_i`, or `None` when `center` does not
/// make the graph a star with chain legs of weight at most -2.
pub fn star_period(graph: &PlumbingGraph, center: i64) -> Option<i64> {
    let legs = star_legs(graph, center).ok()?;
    let mut period = 1i64;
    for leg in legs {
        let Leg { a, .. } = leg_invariants(&leg).ok()?;
        period = period.checked_mul(a)?;
    }
    Some(period)
}

/// `-1 / (a1 a2 a3)`, the Euler number of an integral homology sphere.
pub fn expected_euler(a1: i64, a2: i64, a3: i64) -> BigRational {
    -BigRational::new(BigInt::one(), BigInt::from(a1 * a2 * a3))
}
