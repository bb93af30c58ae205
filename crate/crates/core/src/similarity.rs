//! Similarity and projective similarity over `C` via dependency projectors.
//!
//! `P_Φ` is the orthogonal projection onto `dep(Φ)^⊥`, where `dep(Φ)` is the
//! kernel of the synthesis map. Two frames are similar iff their projectors
//! agree, and projectively similar iff the projectors, read as Gramians of
//! their own columns, are projectively unitarily equivalent.

use alloc::vec::Vec;

use crate::equivalence::{projective_equiv, Witness};
use crate::error::{Error, Result};
use crate::frame::{Frame, GramMatrix, PhaseVector, Scalar, Tolerance, ZERO};
use crate::linalg::row_space_projector;

#[derive(Debug, Clone, PartialEq)]
pub struct DependencyProjector {
    /// `P`, which is also the Gramian of its columns `(P e_j)`.
    pub matrix: GramMatrix,
    pub rank: usize,
}

impl DependencyProjector {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }
}

pub fn dependency_projector(frame: &Frame, tol: &Tolerance) -> DependencyProjector {
    let (d, n) = (frame.dim(), frame.len());
    let mut synthesis = alloc::vec![ZERO; d * n];
    for (j, v) in frame.vectors().iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            synthesis[i * n + j] = x;
        }
    }
    let mut p = row_space_projector(d, n, &synthesis, tol.abs_zero);
    for j in 0..n {
        p[j * n + j].im = 0.0;
    }
    let rank = libm::round(p.iter().step_by(n + 1).map(|z| z.re).sum::<f64>()) as usize;
    DependencyProjector {
        matrix: GramMatrix::from_raw(n, p),
        rank,
    }
}

/// `Δ_C(j_1, ..., j_m) = P_{j_1 j_2} P_{j_2 j_3} ... P_{j_m j_1}`.
pub fn canonical_m_product(p: &DependencyProjector, indices: &[usize]) -> Result<Scalar> {
    let n = p.n();
    if indices.is_empty() {
        return Err(Error::InvalidInput("product index must be nonempty"));
    }
    if let Some(&index) = indices.iter().find(|&&j| j >= n) {
        return Err(Error::IndexOutOfRange { index, n });
    }
    let m = indices.len();
    Ok((0..m)
        .map(|i| p.matrix.get(indices[i], indices[(i + 1) % m]))
        .product())
}

/// How to build `Q` with `w_j = c_j Q v_j`: on the independent vectors
/// `v_{domain[i]}`, set `Q v_{domain[i]} = scalars[i] w_{image[i]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QRecipe {
    pub domain: Vec<usize>,
    pub image: Vec<usize>,
    pub scalars: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityVerdict {
    pub similar: bool,
    pub phases: Option<PhaseVector>,
    pub q_recipe: Option<QRecipe>,
    pub witness: Option<Witness>,
}

/// Greedy maximal linearly independent subset, by Gram-Schmidt residuals.
fn independent_subset(frame: &Frame, tol: &Tolerance) -> Vec<usize> {
    let scale = frame
        .vectors()
        .iter()
        .map(|v| libm::sqrt(v.iter().map(|x| x.norm_sqr()).sum()))
        .fold(0.0, f64::max);
    let cutoff = tol.abs_zero * scale.max(f64::MIN_POSITIVE);
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    let mut chosen = Vec::new();
    for (j, v) in frame.vectors().iter().enumerate() {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let ip: Scalar = r.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= ip * y);
            }
        }
        let norm = libm::sqrt(r.iter().map(|x| x.norm_sqr()).sum());
        if norm > cutoff {
            r.iter_mut().for_each(|x| *x /= norm);
            basis.push(r);
            chosen.push(j);
        }
    }
    chosen
}

fn recipe(f1: &Frame, c: &[Scalar], tol: &Tolerance) -> QRecipe {
    let domain = independent_subset(f1, tol);
    QRecipe {
        scalars: domain.iter().map(|&j| c[j].conj()).collect(),
        image: domain.clone(),
        domain,
    }
}

fn check_sizes(f1: &Frame, f2: &Frame) -> Result<()> {
    if f1.len() != f2.len() {
        return Err(Error::SizeMismatch {
            left: f1.len(),
            right: f2.len(),
        });
    }
    Ok(())
}

/// Similarity: an invertible linear `Q` with `Q v_j = w_j`.
pub fn similar(f1: &Frame, f2: &Frame, tol: &Tolerance) -> Result<SimilarityVerdict> {
    check_sizes(f1, f2)?;
    let p1 = dependency_projector(f1, tol);
    let p2 = dependency_projector(f2, tol);
    Ok(match p1.matrix.first_mismatch(&p2.matrix, tol) {
        None => SimilarityVerdict {
            similar: true,
            phases: None,
            q_recipe: Some(recipe(
                f1,
                &alloc::vec![Scalar::new(1.0, 0.0); f1.len()],
                tol,
            )),
            witness: None,
        },
        Some((row, col)) => SimilarityVerdict {
            similar: false,
            phases: None,
            q_recipe: None,
            witness: Some(Witness::Entry { row, col }),
        },
    })
}

/// Projective similarity: unit `c_j` and invertible `Q` with `w_j = c_j Q v_j`.
///
/// On success `C^* P_1 C = P_2`, and `Q` is given on a maximal independent
/// subset by `Q v_j = conj(c_j) w_j`.
pub fn projectively_similar(f1: &Frame, f2: &Frame, tol: &Tolerance) -> Result<SimilarityVerdict> {
    check_sizes(f1, f2)?;
    let p1 = dependency_projector(f1, tol);
    let p2 = dependency_projector(f2, tol);
    let v = projective_equiv(&p1.matrix, &p2.matrix, tol)?;
    Ok(match v.phases {
        Some(c) if v.equivalent => SimilarityVerdict {
            similar: true,
            q_recipe: Some(recipe(f1, c.as_slice(), tol)),
            phases: Some(c),
            witness: None,
        },
        _ => SimilarityVerdict {
            similar: false,
            phases: None,
            q_recipe: None,
            witness: v.witness,
        },
    })
}
