use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::{equiangularity, GramMatrix, Tolerance};

/// Real equiangular Gramian `G = I + α S` split into its angle and Seidel
/// matrix, plus the two-graph: the triples whose triple product is `-α³`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeidelData {
    pub alpha: f64,
    pub n: usize,
    /// Row-major, 0 on the diagonal and ±1 elsewhere.
    pub seidel: Vec<i8>,
    /// `j < k < l` with negative triple product.
    pub neg_triples: Vec<(usize, usize, usize)>,
}

impl SeidelData {
    pub fn sign(&self, j: usize, k: usize) -> i8 {
        self.seidel[j * self.n + k]
    }
}

pub fn seidel_data(g: &GramMatrix, tol: &Tolerance) -> Result<SeidelData> {
    let n = g.n();
    let alpha = equiangularity(g, tol).ok_or(Error::NotRealEquiangular)?;
    if n < 2 || tol.is_zero(alpha) {
        return Err(Error::NotRealEquiangular);
    }
    let thr = tol.threshold(1.0);
    if g.entries().iter().any(|z| z.im.abs() > thr) {
        return Err(Error::NotRealEquiangular);
    }
    let mut seidel = vec![0i8; n * n];
    for j in 0..n {
        for k in 0..n {
            if j != k {
                seidel[j * n + k] = if g.get(j, k).re > 0.0 { 1 } else { -1 };
            }
        }
    }
    let s = |j: usize, k: usize| seidel[j * n + k];
    let mut neg_triples = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            for l in k + 1..n {
                if s(j, k) * s(k, l) * s(l, j) < 0 {
                    neg_triples.push((j, k, l));
                }
            }
        }
    }
    Ok(SeidelData {
        alpha,
        n,
        seidel,
        neg_triples,
    })
}
