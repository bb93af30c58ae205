//! Projective unitary equivalence of finite frames.
//!
//! Two sequences of vectors `(v_j)` and `(w_j)` are projectively unitarily
//! equivalent when `w_j = c_j U v_j` for a unitary `U` and unit scalars `c_j`.
//! This crate decides that relation from Gramians and Bargmann invariants
//! (`m`-products), reconstructs Gramians from determining sets of invariants,
//! handles the projective similarity analogue through dependency projectors,
//! and counts cyclic harmonic frames up to the various equivalences.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the CLI and thread
//! pools live in the companion `frameq` crate.

#![no_std]

extern crate alloc;

pub mod equivalence;
pub mod error;
pub mod frame;
pub mod graph;
pub mod harmonic;
pub mod invariants;
mod linalg;
pub mod similarity;

pub use equivalence::{
    canonical_gram, compare_determining_sets, projective_equiv, projective_equiv_reindex,
    reconstruct_from_products, seidel_data, unitary_equiv, unitary_equiv_reindex, CanonicalGram,
    FreePhases, Reconstruction, SeidelData, Verdict, Witness, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use frame::{
    apply_gauge, equiangularity, gram, is_tight, vectors_from_gram, Frame, GramMatrix, PhaseVector,
    Scalar, Tolerance,
};
pub use graph::{
    build_frame_graph, fundamental_cycles, is_chordal, spanning_forest, triangle_basis, Cycle,
    CycleBasis, FrameGraph, SpanningForest,
};
pub use invariants::{
    check_mubs, derive_product, determining_set, m_product, moduli_from_triples,
    triangle_determining_set, triple_products, DeterminingSet, MProduct, ProductIndex,
    TripleProducts,
};
pub use similarity::{
    canonical_m_product, dependency_projector, projectively_similar, similar, DependencyProjector,
    QRecipe, SimilarityVerdict,
};
