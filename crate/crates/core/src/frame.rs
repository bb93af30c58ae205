//! Frames, Gramians and the diagonal gauge action.
//!
//! Inner products are linear in the first variable, and the Gramian of a
//! frame `(v_j)` is `[<v_k, v_j>]_{j,k}`: entry `(j, k)` holds `<v_k, v_j>`.
//! Every routine in the crate that reads a Gram entry follows this layout.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;

pub use num_complex::Complex64 as Scalar;

pub(crate) const ZERO: Scalar = Scalar::new(0.0, 0.0);
pub(crate) const ONE: Scalar = Scalar::new(1.0, 0.0);

/// Numerical thresholds threaded through every comparison.
///
/// `abs_zero` decides when a modulus counts as zero (and therefore whether an
/// edge exists in the frame graph); `rel_match` is the relative tolerance for
/// equality of nonzero quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_zero: f64,
    pub rel_match: f64,
}

impl Tolerance {
    pub const DEFAULT_ABS_ZERO: f64 = 1e-9;
    pub const DEFAULT_REL_MATCH: f64 = 1e-8;

    pub fn new(abs_zero: f64, rel_match: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(abs_zero) && ok(rel_match) {
            Ok(Tolerance {
                abs_zero,
                rel_match,
            })
        } else {
            Err(Error::InvalidTolerance)
        }
    }

    /// Match threshold for quantities of magnitude `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        let rel = self.rel_match * scale;
        if rel > self.abs_zero {
            rel
        } else {
            self.abs_zero
        }
    }

    pub fn is_zero(&self, modulus: f64) -> bool {
        modulus <= self.abs_zero
    }

    /// Real comparison at the scale of the larger argument.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.threshold(a.abs().max(b.abs()))
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_zero: Self::DEFAULT_ABS_ZERO,
            rel_match: Self::DEFAULT_REL_MATCH,
        }
    }
}

pub(crate) fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A finite sequence of `n` vectors in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    dim: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl Frame {
    pub fn new(dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("frame dimension must be positive"));
        }
        if vectors.is_empty() {
            return Err(Error::InvalidInput(
                "frame must contain at least one vector",
            ));
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if !v.iter().all(|z| is_finite(*z)) {
                return Err(Error::NonFinite);
            }
        }
        Ok(Frame { dim, vectors })
    }

    /// Builds a frame from real coordinates.
    pub fn from_real(dim: usize, vectors: &[&[f64]]) -> Result<Self> {
        let vectors = vectors
            .iter()
            .map(|v| v.iter().map(|&x| Scalar::new(x, 0.0)).collect())
            .collect();
        Frame::new(dim, vectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> &[Scalar] {
        &self.vectors[j]
    }

    /// The frame `(c_j v_j)`.
    pub fn scaled(&self, phases: &[Scalar]) -> Result<Frame> {
        if phases.len() != self.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: phases.len(),
            });
        }
        let vectors = self
            .vectors
            .iter()
            .zip(phases)
            .map(|(v, c)| v.iter().map(|x| c * x).collect())
            .collect();
        Ok(Frame {
            dim: self.dim,
            vectors,
        })
    }

    /// Applies the linear map given by a row-major `out_dim x dim` matrix to
    /// every vector.
    pub fn transformed(&self, out_dim: usize, matrix: &[Scalar]) -> Result<Frame> {
        if matrix.len() != out_dim * self.dim {
            return Err(Error::DimensionMismatch {
                expected: out_dim * self.dim,
                found: matrix.len(),
            });
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                (0..out_dim)
                    .map(|r| {
                        let row = &matrix[r * self.dim..(r + 1) * self.dim];
                        row.iter().zip(v).map(|(a, b)| a * b).sum()
                    })
                    .collect()
            })
            .collect();
        Frame::new(out_dim, vectors)
    }
}

/// Hermitian positive semidefinite matrix of inner products, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl GramMatrix {
    /// Validates finiteness, Hermitian symmetry and a real nonnegative
    /// diagonal. Positive semidefiniteness is checked separately with
    /// [`GramMatrix::is_psd`], since product data need not be realizable.
    pub fn new(n: usize, entries: Vec<Scalar>, tol: &Tolerance) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("Gram matrix must be at least 1x1"));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if !entries.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let thr = tol.threshold(scale);
        for j in 0..n {
            let d = entries[j * n + j];
            if d.im.abs() > thr || d.re < -thr {
                return Err(Error::NotHermitian { row: j, col: j });
            }
            for k in j + 1..n {
                if (entries[j * n + k] - entries[k * n + j].conj()).norm() > thr {
                    return Err(Error::NotHermitian { row: j, col: k });
                }
            }
        }
        Ok(GramMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, tol: &Tolerance) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("Gram matrix rows must have length n"));
        }
        GramMatrix::new(n, rows.into_iter().flatten().collect(), tol)
    }

    pub fn from_real_rows(rows: &[&[f64]], tol: &Tolerance) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::new(x, 0.0)).collect())
            .collect();
        GramMatrix::from_rows(rows, tol)
    }

    pub(crate) fn from_raw(n: usize, entries: Vec<Scalar>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        GramMatrix { n, entries }
    }

    /// Sets entry `(j, k)` and its Hermitian mirror.
    pub(crate) fn set_pair(&mut self, j: usize, k: usize, z: Scalar) {
        self.entries[j * self.n + k] = z;
        self.entries[k * self.n + j] = z.conj();
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![ZERO; n * n];
        for j in 0..n {
            entries[j * n + j] = ONE;
        }
        GramMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(j, k)`, which is `<v_k, v_j>`.
    pub fn get(&self, j: usize, k: usize) -> Scalar {
        self.entries[j * self.n + k]
    }

    /// The inner product `<v_a, v_b>`.
    pub fn inner(&self, a: usize, b: usize) -> Scalar {
        self.get(b, a)
    }

    pub fn modulus(&self, j: usize, k: usize) -> f64 {
        self.get(j, k).norm()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, j: usize) -> &[Scalar] {
        &self.entries[j * self.n..(j + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Row-major grid of entry moduli.
    pub fn moduli(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm()).collect()
    }

    /// The reindexed matrix with entry `(j, k)` equal to `self[perm[j]][perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<GramMatrix> {
        check_permutation(perm, self.n)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                entries.push(self.get(perm[j], perm[k]));
            }
        }
        Ok(GramMatrix { n, entries })
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (mut vals, _) = linalg::hermitian_eigen(self.n, &self.entries);
        vals.sort_by(f64::total_cmp);
        vals
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// PSD test: no eigenvalue below `-abs_zero * spectral_radius`.
    pub fn is_psd(&self, tol: &Tolerance) -> bool {
        let vals = self.eigenvalues();
        let radius = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        vals.first()
            .is_none_or(|&min| min >= -tol.abs_zero * radius)
    }

    /// First entry (row-major, upper triangle) where the two matrices differ
    /// by more than the match threshold at the larger matrix's scale.
    pub fn first_mismatch(&self, other: &GramMatrix, tol: &Tolerance) -> Option<(usize, usize)> {
        if self.n != other.n {
            return Some((0, 0));
        }
        let thr = tol.threshold(self.max_modulus().max(other.max_modulus()));
        (0..self.n)
            .flat_map(|j| (j..self.n).map(move |k| (j, k)))
            .find(|&(j, k)| (self.get(j, k) - other.get(j, k)).norm() > thr)
    }

    pub fn approx_eq(&self, other: &GramMatrix, tol: &Tolerance) -> bool {
        self.n == other.n && self.first_mismatch(other, tol).is_none()
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, n });
        }
        if core::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidInput("permutation repeats an index"));
        }
    }
    Ok(())
}

/// Unit scalars `c_j`, one per vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(Vec<Scalar>);

impl PhaseVector {
    pub fn new(phases: Vec<Scalar>, tol: &Tolerance) -> Result<Self> {
        for (index, c) in phases.iter().enumerate() {
            if !is_finite(*c) {
                return Err(Error::NonFinite);
            }
            if !tol.close(c.norm(), 1.0) {
                return Err(Error::NotUnitPhase { index });
            }
        }
        Ok(PhaseVector(phases))
    }

    pub fn ones(n: usize) -> Self {
        PhaseVector(vec![ONE; n])
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        PhaseVector(angles.iter().map(|&t| Scalar::from_polar(1.0, t)).collect())
    }

    pub(crate) fn from_raw(phases: Vec<Scalar>) -> Self {
        PhaseVector(phases)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn conj(&self) -> PhaseVector {
        PhaseVector(self.0.iter().map(|c| c.conj()).collect())
    }
}

/// Gramian of a frame: entry `(j, k)` is `<v_k, v_j>`.
pub fn gram(frame: &Frame) -> GramMatrix {
    let n = frame.len();
    let mut entries = vec![ZERO; n * n];
    for j in 0..n {
        for k in j..n {
            let ip: Scalar = frame.vectors[k]
                .iter()
                .zip(&frame.vectors[j])
                .map(|(a, b)| a * b.conj())
                .sum();
            entries[j * n + k] = ip;
            entries[k * n + j] = ip.conj();
        }
        entries[j * n + j].im = 0.0;
    }
    GramMatrix { n, entries }
}

/// Recovers vectors with the given Gramian from its eigendecomposition.
///
/// The returned frame lives in `C^r` where `r` is the numerical rank;
/// eigenvalues in `[-abs_zero * radius, abs_zero * radius]` count as zero.
pub fn vectors_from_gram(g: &GramMatrix, tol: &Tolerance) -> Result<Frame> {
    let n = g.n;
    let (vals, vecs) = linalg::hermitian_eigen(n, &g.entries);
    let radius = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let cutoff = tol.abs_zero * radius;
    if let Some(&min) = vals.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < -cutoff {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    let mut kept: Vec<usize> = (0..n).filter(|&i| vals[i] > cutoff).collect();
    kept.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    if kept.is_empty() {
        return Frame::new(1, vec![vec![ZERO]; n]);
    }
    // v_j[i] = sqrt(lambda_i) * conj(Q[j][i]) gives V^* V = Q Lambda Q^*.
    let vectors = (0..n)
        .map(|j| {
            kept.iter()
                .map(|&i| vecs[(j, i)].conj() * libm::sqrt(vals[i]))
                .collect()
        })
        .collect();
    Frame::new(kept.len(), vectors)
}

/// Gramian of the scaled frame `(c_j v_j)`: entry `(j, k)` becomes
/// `conj(c_j) c_k g[j][k]`, i.e. `C^* G C`.
pub fn apply_gauge(g: &GramMatrix, c: &PhaseVector) -> Result<GramMatrix> {
    if c.len() != g.n {
        return Err(Error::SizeMismatch {
            left: g.n,
            right: c.len(),
        });
    }
    let n = g.n;
    let c = c.as_slice();
    let entries = (0..n * n)
        .map(|i| {
            let (j, k) = (i / n, i % n);
            c[j].conj() * c[k] * g.entries[i]
        })
        .collect();
    Ok(GramMatrix { n, entries })
}

/// Returns the frame bound `A` when `sum_j v_j v_j^* = A I` within tolerance.
pub fn is_tight(frame: &Frame, tol: &Tolerance) -> Option<f64> {
    let d = frame.dim;
    let mut s = vec![ZERO; d * d];
    for v in &frame.vectors {
        for a in 0..d {
            for b in 0..d {
                s[a * d + b] += v[a] * v[b].conj();
            }
        }
    }
    let bound = (0..d).map(|a| s[a * d + a].re).sum::<f64>() / d as f64;
    if tol.is_zero(bound) {
        return None;
    }
    let thr = tol.threshold(bound);
    let tight = (0..d).all(|a| {
        (0..d).all(|b| {
            let target = if a == b { bound } else { 0.0 };
            (s[a * d + b] - Scalar::new(target, 0.0)).norm() <= thr
        })
    });
    tight.then_some(bound)
}

/// Returns the common modulus `C` when the diagonal is 1 and every
/// off-diagonal entry has modulus `C`.
pub fn equiangularity(g: &GramMatrix, tol: &Tolerance) -> Option<f64> {
    let n = g.n;
    let thr = tol.threshold(1.0);
    if (0..n).any(|j| (g.get(j, j) - ONE).norm() > thr) {
        return None;
    }
    if n == 1 {
        return Some(0.0);
    }
    let c = g.modulus(0, 1);
    let equal = (0..n).all(|j| (j + 1..n).all(|k| (g.modulus(j, k) - c).abs() <= thr));
    equal.then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::sqrt;

    fn three_lines() -> Frame {
        let h = sqrt(3.0) / 2.0;
        Frame::from_real(2, &[&[1.0, 0.0], &[-0.5, h], &[-0.5, -h]]).unwrap()
    }

    /// The matrix printed for three equiangular vectors: unit diagonal, all
    /// off-diagonal entries 1/2 (eigenvalues 2, 1/2, 1/2).
    fn printed_equiangular() -> GramMatrix {
        GramMatrix::from_real_rows(
            &[&[1.0, 0.5, 0.5], &[0.5, 1.0, 0.5], &[0.5, 0.5, 1.0]],
            &Tolerance::default(),
        )
        .unwrap()
    }

    #[test]
    fn orthonormal_basis_has_identity_gram() {
        let f = Frame::from_real(3, &[&[1., 0., 0.], &[0., 1., 0.], &[0., 0., 1.]]).unwrap();
        assert!(gram(&f).approx_eq(&GramMatrix::identity(3), &Tolerance::default()));
    }

    #[test]
    fn equally_spaced_lines_gram() {
        let tol = Tolerance::default();
        let g = gram(&three_lines());
        for j in 0..3 {
            assert!((g.get(j, j).re - 1.0).abs() < 1e-15);
            for k in 0..3 {
                if j != k {
                    assert!((g.get(j, k) - Scalar::new(-0.5, 0.0)).norm() < 1e-15);
                }
            }
        }
        assert_eq!(equiangularity(&g, &tol), Some(0.5));
        assert_eq!(equiangularity(&printed_equiangular(), &tol), Some(0.5));
        assert_eq!(equiangularity(&GramMatrix::identity(3), &tol), Some(0.0));
    }

    #[test]
    fn rejects_bad_frames() {
        assert_eq!(
            Frame::new(2, vec![vec![ONE]]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        );
        assert!(Frame::new(1, vec![]).is_err());
        assert_eq!(
            Frame::new(1, vec![vec![Scalar::new(f64::NAN, 0.0)]]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn rejects_non_hermitian() {
        let tol = Tolerance::default();
        let err = GramMatrix::from_real_rows(&[&[1.0, 0.3], &[0.2, 1.0]], &tol).unwrap_err();
        assert_eq!(err, Error::NotHermitian { row: 0, col: 1 });
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 1e-8).is_err());
        assert!(Tolerance::new(1e-9, f64::INFINITY).is_err());
        assert!(Tolerance::new(1e-12, 1e-10).is_ok());
    }

    #[test]
    fn tight_bounds() {
        let tol = Tolerance::default();
        let basis = Frame::from_real(2, &[&[1., 0.], &[0., 1.]]).unwrap();
        assert_eq!(is_tight(&basis, &tol), Some(1.0));
        let a = is_tight(&three_lines(), &tol).unwrap();
        assert!((a - 1.5).abs() < 1e-12);
    }

    #[test]
    fn shifted_basis_cycle_is_not_tight() {
        // v_j = e_j + e_{j+1}, v_4 = e_4 + e_1 in C^4: frame operator is 2I + S + S^T.
        let f = Frame::from_real(
            4,
            &[
                &[1., 1., 0., 0.],
                &[0., 1., 1., 0.],
                &[0., 0., 1., 1.],
                &[1., 0., 0., 1.],
            ],
        )
        .unwrap();
        assert_eq!(is_tight(&f, &Tolerance::default()), None);
    }

    #[test]
    fn vectors_from_gram_rank_and_round_trip() {
        let tol = Tolerance::default();
        let g = gram(&three_lines());
        let f = vectors_from_gram(&g, &tol).unwrap();
        assert_eq!(f.dim(), 2);
        assert!(gram(&f).approx_eq(&g, &tol));

        let id = GramMatrix::identity(3);
        let f = vectors_from_gram(&id, &tol).unwrap();
        assert_eq!(f.dim(), 3);
        assert!(gram(&f).approx_eq(&id, &tol));

        let printed = printed_equiangular();
        let f = vectors_from_gram(&printed, &tol).unwrap();
        assert_eq!(f.dim(), 3);
        assert!(gram(&f).approx_eq(&printed, &tol));
    }

    #[test]
    fn vectors_from_gram_rejects_indefinite() {
        let tol = Tolerance::default();
        let g = GramMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]], &tol).unwrap();
        assert!(matches!(
            vectors_from_gram(&g, &tol),
            Err(Error::NotPsd { .. })
        ));
        assert!(!g.is_psd(&tol));
    }

    #[test]
    fn gauge_identity_and_inverse() {
        let tol = Tolerance::default();
        let g = gram(&three_lines());
        assert_eq!(apply_gauge(&g, &PhaseVector::ones(3)).unwrap(), g);
        let c = PhaseVector::from_angles(&[0.3, -1.2, 2.0]);
        let back = apply_gauge(&apply_gauge(&g, &c).unwrap(), &c.conj()).unwrap();
        assert!(back.approx_eq(&g, &tol));
    }

    #[test]
    fn gauge_matches_scaled_frame() {
        let tol = Tolerance::default();
        let f = three_lines();
        let c = PhaseVector::from_angles(&[0.7, 2.1, -0.4]);
        let scaled = gram(&f.scaled(c.as_slice()).unwrap());
        assert!(scaled.approx_eq(&apply_gauge(&gram(&f), &c).unwrap(), &tol));
    }

    #[test]
    fn permuted_reindexes_both_axes() {
        let tol = Tolerance::default();
        let g = GramMatrix::from_real_rows(
            &[&[1.0, 0.1, 0.2], &[0.1, 2.0, 0.3], &[0.2, 0.3, 3.0]],
            &tol,
        )
        .unwrap();
        let p = g.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.get(0, 0).re, 3.0);
        assert_eq!(p.get(0, 1).re, 0.2);
        assert!(g.permuted(&[0, 0, 1]).is_err());
    }
}
