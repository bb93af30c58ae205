use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::chord_cycle;
use crate::error::{Error, Result};
use crate::frame::{GramMatrix, Scalar, Tolerance, ZERO};
use crate::graph::{spanning_forest, SpanningForest};
use crate::invariants::{derive_product, DeterminingSet};

/// Choices for the free phases of a reconstruction.
///
/// `phases[(j, k)]` (with `j < k`) is the argument of `<v_j, v_k>` on a tree
/// edge; edges not listed get phase 1. `tree` replaces the canonical spanning
/// forest by an explicit set of tree edges.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FreePhases {
    pub phases: BTreeMap<(usize, usize), Scalar>,
    pub tree: Option<Vec<(usize, usize)>>,
}

impl FreePhases {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_phase(mut self, j: usize, k: usize, phase: Scalar) -> Self {
        self.phases.insert((j.min(k), j.max(k)), phase);
        self
    }

    pub fn with_tree(mut self, edges: Vec<(usize, usize)>) -> Self {
        self.tree = Some(edges);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub gram: GramMatrix,
    pub forest: SpanningForest,
    /// False when the completed matrix fails the PSD check, i.e. the data
    /// cannot come from an actual frame.
    pub realizable: bool,
}

/// Rebuilds a Gramian from 1-, 2- and cycle products.
///
/// Tree-edge entries are modulus times free phase. Each chord entry is then
/// solved from the product of its fundamental cycle by dividing out the
/// entries already known along the cycle. Cycle products not present in the
/// data are derived from the basis that is present.
pub fn reconstruct_from_products(
    set: &DeterminingSet,
    free: &FreePhases,
    tol: &Tolerance,
) -> Result<Reconstruction> {
    let n = set.n;
    let graph = set.graph(tol);
    let forest = match &free.tree {
        Some(edges) => SpanningForest::from_tree_edges(&graph, edges)?,
        None => spanning_forest(&graph),
    };
    for (&(j, k), z) in &free.phases {
        if j >= n || k >= n {
            return Err(Error::IndexOutOfRange { index: j.max(k), n });
        }
        if !forest.is_tree_edge(j, k) {
            return Err(Error::InvalidInput(
                "free phases are only allowed on tree edges",
            ));
        }
        if !tol.close(z.norm(), 1.0) {
            return Err(Error::NotUnitPhase { index: j });
        }
    }

    let mut g = GramMatrix::from_raw(n, vec![ZERO; n * n]);
    for j in 0..n {
        g.set_pair(j, j, Scalar::new(set.norms[j], 0.0));
    }
    for &(j, k) in &forest.tree_edges {
        let phase = free
            .phases
            .get(&(j, k))
            .copied()
            .unwrap_or(Scalar::new(1.0, 0.0));
        // entry (k, j) holds <v_j, v_k>
        g.set_pair(k, j, phase * set.modulus(j, k));
    }

    let scale = set
        .moduli
        .iter()
        .chain(&set.norms)
        .fold(0.0_f64, |m, &x| m.max(x));
    let thr = tol.threshold(scale);
    for (a, b) in graph.edges() {
        if forest.is_tree_edge(a, b) {
            continue;
        }
        let cycle = chord_cycle(&forest, a, b);
        let value = match derive_product(set, cycle.vertices(), tol) {
            Ok(v) => v,
            Err(Error::NotInSpan) => {
                return Err(Error::MissingCycleProduct {
                    cycle: cycle.vertices().to_vec(),
                })
            }
            Err(e) => return Err(e),
        };
        let mut known = Scalar::new(1.0, 0.0);
        let mut chord_step = None;
        for (x, y) in cycle.steps() {
            if (x.min(y), x.max(y)) == (a, b) {
                chord_step = Some((x, y));
            } else {
                known *= g.inner(x, y);
            }
        }
        let (x, y) = chord_step.expect("fundamental cycle contains its chord");
        let solved = value / known;
        let expected = set.modulus(x, y);
        if (solved.norm() - expected).abs() > thr {
            return Err(Error::InconsistentModulus {
                row: a,
                col: b,
                expected,
                found: solved.norm(),
            });
        }
        // <v_x, v_y> lives at entry (y, x)
        g.set_pair(y, x, solved);
    }
    let realizable = g.is_psd(tol);
    Ok(Reconstruction {
        gram: g,
        forest,
        realizable,
    })
}
