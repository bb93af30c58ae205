//! Decision procedures for unitary and projective unitary equivalence.
//!
//! Projective equivalence is decided constructively: after the moduli agree,
//! phases are propagated along a spanning forest of the frame graph so that
//! the gauged first Gramian matches the second on every tree edge. The
//! remaining (chord) entries then match iff every cycle product agrees.

mod reconstruct;
mod reindex;
mod seidel;

use alloc::vec;
use alloc::vec::Vec;

pub use reconstruct::{reconstruct_from_products, FreePhases, Reconstruction};
pub use reindex::{projective_equiv_reindex, unitary_equiv_reindex, DEFAULT_BUDGET};
pub use seidel::{seidel_data, SeidelData};

use crate::error::{Error, Result};
use crate::frame::{apply_gauge, GramMatrix, PhaseVector, Scalar, Tolerance, ONE};
use crate::graph::{build_frame_graph, spanning_forest, Cycle, SpanningForest};
use crate::invariants::{derive_product, m_product, DeterminingSet};

/// Why two inputs are not equivalent.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Entry `(row, col)` differs (in modulus, or outright for unitary checks).
    Entry { row: usize, col: usize },
    /// The `m`-products of this cycle differ.
    Cycle {
        indices: Vec<usize>,
        left: Scalar,
        right: Scalar,
    },
    /// A reindexing search visited `nodes` nodes and found no permutation.
    SearchExhausted { nodes: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub equivalent: bool,
    /// Certificate `c` with `apply_gauge(g1', c) = g2`, where `g1'` is `g1`
    /// reindexed by `permutation` when present.
    pub phases: Option<PhaseVector>,
    /// `permutation[v] = u` maps index `v` of the second input to index `u` of
    /// the first.
    pub permutation: Option<Vec<usize>>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub(crate) fn yes(phases: Option<PhaseVector>, permutation: Option<Vec<usize>>) -> Self {
        Verdict {
            equivalent: true,
            phases,
            permutation,
            witness: None,
        }
    }

    pub(crate) fn no(witness: Witness) -> Self {
        Verdict {
            equivalent: false,
            phases: None,
            permutation: None,
            witness: Some(witness),
        }
    }
}

fn same_size(g1: &GramMatrix, g2: &GramMatrix) -> Result<()> {
    if g1.n() == g2.n() {
        Ok(())
    } else {
        Err(Error::SizeMismatch {
            left: g1.n(),
            right: g2.n(),
        })
    }
}

pub(crate) fn unit(z: Scalar) -> Scalar {
    let r = z.norm();
    if r > 0.0 && r.is_finite() {
        z / r
    } else {
        ONE
    }
}

/// Equal Gramians, i.e. unitary equivalence of the underlying frames.
pub fn unitary_equiv(g1: &GramMatrix, g2: &GramMatrix, tol: &Tolerance) -> Result<Verdict> {
    same_size(g1, g2)?;
    Ok(match g1.first_mismatch(g2, tol) {
        None => Verdict::yes(None, None),
        Some((row, col)) => Verdict::no(Witness::Entry { row, col }),
    })
}

pub(crate) fn moduli_mismatch(
    g1: &GramMatrix,
    g2: &GramMatrix,
    tol: &Tolerance,
) -> Option<(usize, usize)> {
    let thr = tol.threshold(g1.max_modulus().max(g2.max_modulus()));
    let n = g1.n();
    (0..n)
        .flat_map(|j| (j..n).map(move |k| (j, k)))
        .find(|&(j, k)| (g1.modulus(j, k) - g2.modulus(j, k)).abs() > thr)
}

/// Phases along `forest` making `apply_gauge(g1, c)` agree with `g2` on
/// every tree edge, with each root phase fixed to 1.
fn propagate(g1: &GramMatrix, g2: &GramMatrix, forest: &SpanningForest) -> PhaseVector {
    let mut c = vec![ONE; g1.n()];
    for &q in &forest.order {
        let p = forest.parent[q];
        if p != q {
            c[q] = unit(c[p] * g2.get(p, q) / g1.get(p, q));
        }
    }
    PhaseVector::from_raw(c)
}

/// Fundamental cycle of `forest` closed by the edge `{a, b}`.
pub(crate) fn chord_cycle(forest: &SpanningForest, a: usize, b: usize) -> Cycle {
    let (a, b) = (a.min(b), a.max(b));
    let path = forest.path(a, b).expect("chord endpoints share a tree");
    Cycle::from_vertices_unchecked(path).canonical()
}

/// Projective unitary equivalence, with a phase certificate on success and
/// a mismatching entry or cycle otherwise.
pub fn projective_equiv(g1: &GramMatrix, g2: &GramMatrix, tol: &Tolerance) -> Result<Verdict> {
    same_size(g1, g2)?;
    if let Some((row, col)) = moduli_mismatch(g1, g2, tol) {
        return Ok(Verdict::no(Witness::Entry { row, col }));
    }
    let graph = build_frame_graph(g1, tol);
    let forest = spanning_forest(&graph);
    let c = propagate(g1, g2, &forest);
    let gauged = apply_gauge(g1, &c)?;
    match gauged.first_mismatch(g2, tol) {
        None => Ok(Verdict::yes(Some(c), None)),
        Some((j, k)) if j != k && graph.has_edge(j, k) && !forest.is_tree_edge(j, k) => {
            let cycle = chord_cycle(&forest, j, k);
            let indices = cycle.vertices().to_vec();
            Ok(Verdict::no(Witness::Cycle {
                left: m_product(g1, &indices)?,
                right: m_product(g2, &indices)?,
                indices,
            }))
        }
        Some((row, col)) => Ok(Verdict::no(Witness::Entry { row, col })),
    }
}

/// Representative of the projective class with real nonnegative entries on
/// the edges of the canonical spanning forest.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalGram {
    pub gram: GramMatrix,
    pub forest: SpanningForest,
    /// The gauge taking the input to `gram`.
    pub phases: PhaseVector,
}

pub fn canonical_gram(g: &GramMatrix, tol: &Tolerance) -> CanonicalGram {
    let graph = build_frame_graph(g, tol);
    let forest = spanning_forest(&graph);
    let mut c = vec![ONE; g.n()];
    for &q in &forest.order {
        let p = forest.parent[q];
        if p != q {
            c[q] = unit(c[p] * g.get(p, q).conj());
        }
    }
    let phases = PhaseVector::from_raw(c);
    let mut gram = apply_gauge(g, &phases).expect("phase vector has length n");
    for &(p, q) in &forest.tree_edges {
        let m = gram.modulus(p, q);
        gram.set_pair(p, q, Scalar::new(m, 0.0));
    }
    CanonicalGram {
        gram,
        forest,
        phases,
    }
}

/// Decides projective equivalence from determining sets alone: the norms and
/// moduli must agree, and every cycle product of the first set must be
/// reproduced by the second.
pub fn compare_determining_sets(
    s1: &DeterminingSet,
    s2: &DeterminingSet,
    tol: &Tolerance,
) -> Result<Verdict> {
    if s1.n != s2.n {
        return Err(Error::SizeMismatch {
            left: s1.n,
            right: s2.n,
        });
    }
    let n = s1.n;
    let scale = (0..n * n)
        .map(|i| s1.modulus(i / n, i % n).max(s2.modulus(i / n, i % n)))
        .fold(0.0, f64::max);
    let thr = tol.threshold(scale);
    for j in 0..n {
        for k in j..n {
            if (s1.modulus(j, k) - s2.modulus(j, k)).abs() > thr {
                return Ok(Verdict::no(Witness::Entry { row: j, col: k }));
            }
        }
    }
    for p in &s1.cycle_products {
        let other = derive_product(s2, &p.indices, tol)?;
        let thr = tol.threshold(p.value.norm().max(other.norm()));
        if (other - p.value).norm() > thr {
            return Ok(Verdict::no(Witness::Cycle {
                indices: p.indices.clone(),
                left: p.value,
                right: other,
            }));
        }
    }
    for p in &s2.cycle_products {
        let other = derive_product(s1, &p.indices, tol)?;
        let thr = tol.threshold(p.value.norm().max(other.norm()));
        if (other - p.value).norm() > thr {
            return Ok(Verdict::no(Witness::Cycle {
                indices: p.indices.clone(),
                left: other,
                right: p.value,
            }));
        }
    }
    Ok(Verdict::yes(None, None))
}

#[cfg(test)]
mod tests;
