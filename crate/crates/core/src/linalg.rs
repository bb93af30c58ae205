//! Thin bridge to nalgebra's Hermitian eigensolver and SVD.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::frame::Scalar;

pub(crate) fn to_matrix(rows: usize, cols: usize, row_major: &[Scalar]) -> DMatrix<Scalar> {
    DMatrix::from_row_slice(rows, cols, row_major)
}

/// Eigenvalues (unsorted) and the matrix whose columns are the matching
/// orthonormal eigenvectors.
pub(crate) fn hermitian_eigen(n: usize, row_major: &[Scalar]) -> (Vec<f64>, DMatrix<Scalar>) {
    let m = to_matrix(n, n, row_major);
    // Symmetrize first: the solver only reads one triangle.
    let h = (&m + m.adjoint()) * Scalar::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Orthogonal projector onto the row space of a `rows x cols` matrix, which
/// is the orthogonal complement of its kernel. Singular values at or below
/// `rel_cutoff * sigma_max` are treated as zero.
pub(crate) fn row_space_projector(
    rows: usize,
    cols: usize,
    row_major: &[Scalar],
    rel_cutoff: f64,
) -> Vec<Scalar> {
    let m = to_matrix(rows, cols, row_major);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |a, &s| a.max(s));
    let cutoff = rel_cutoff * sigma_max;
    let mut p = alloc::vec![Scalar::new(0.0, 0.0); cols * cols];
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff {
            continue;
        }
        // Right singular vector w = conj(row i of V^*); P += w w^*.
        for j in 0..cols {
            let wj = v_t[(i, j)].conj();
            for k in 0..cols {
                p[j * cols + k] += wj * v_t[(i, k)];
            }
        }
    }
    p
}
