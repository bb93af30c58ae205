//! Bargmann invariants (`m`-products) and determining sets.
//!
//! `Δ(j_1, ..., j_m) = <v_{j_1}, v_{j_2}> <v_{j_2}, v_{j_3}> ... <v_{j_m}, v_{j_1}>`,
//! evaluated from Gram entries. These are invariant under `v_j -> c_j U v_j`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::frame::{gram, Frame, GramMatrix, Scalar, Tolerance, ONE};
use crate::graph::{
    fundamental_cycles, spanning_forest, triangle_basis, ChordIndex, Cycle, CycleBasis, FrameGraph,
    Gf2Echelon,
};

/// An index tuple `(j_1, ..., j_m)`; repeats are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductIndex(Vec<usize>);

impl ProductIndex {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidInput("product index must be nonempty"));
        }
        if let Some(&index) = indices.iter().find(|&&j| j >= n) {
            return Err(Error::IndexOutOfRange { index, n });
        }
        Ok(ProductIndex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// An `m`-product together with its index tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct MProduct {
    pub indices: Vec<usize>,
    pub value: Scalar,
}

/// Evaluates `Δ(j_1, ..., j_m)` from the Gramian.
pub fn m_product(g: &GramMatrix, indices: &[usize]) -> Result<Scalar> {
    let idx = ProductIndex::new(indices.to_vec(), g.n())?;
    let m = idx.0.len();
    Ok((0..m)
        .map(|i| g.inner(idx.0[i], idx.0[(i + 1) % m]))
        .product())
}

fn triple_key(j: usize, k: usize, l: usize) -> ((usize, usize, usize), bool) {
    let forward = [(j, k, l), (k, l, j), (l, j, k)];
    let reverse = [(l, k, j), (k, j, l), (j, l, k)];
    let f = *forward.iter().min().unwrap();
    let r = *reverse.iter().min().unwrap();
    if f <= r {
        (f, false)
    } else {
        (r, true)
    }
}

/// All triple products `T_{jkl}`, one stored value per class of index
/// triples under rotation and reversal (reversal conjugates the value).
#[derive(Debug, Clone, PartialEq)]
pub struct TripleProducts {
    n: usize,
    values: BTreeMap<(usize, usize, usize), Scalar>,
}

impl TripleProducts {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize, l: usize) -> Scalar {
        let (key, conj) = triple_key(j, k, l);
        let v = self.values[&key];
        if conj {
            v.conj()
        } else {
            v
        }
    }

    /// Stored representatives and their values, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize, usize), Scalar)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Builds the table from explicit values. Missing classes are an error.
    pub fn from_fn(n: usize, mut value: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut values = BTreeMap::new();
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let (key, conj) = triple_key(j, k, l);
                    if key == (j, k, l) && !conj {
                        values.insert(key, value(j, k, l));
                    }
                }
            }
        }
        TripleProducts { n, values }
    }
}

pub fn triple_products(g: &GramMatrix) -> TripleProducts {
    TripleProducts::from_fn(g.n(), |j, k, l| {
        g.inner(j, k) * g.inner(k, l) * g.inner(l, j)
    })
}

/// Recovers `|<v_j, v_k>|` from `T_{jjj} = ||v_j||^6` and
/// `T_{jjk} = ||v_j||^2 |<v_j, v_k>|^2`. Returns a row-major `n x n` grid.
pub fn moduli_from_triples(t: &TripleProducts, tol: &Tolerance) -> Result<Vec<f64>> {
    let n = t.n();
    let mut out = vec![0.0; n * n];
    for j in 0..n {
        let tjjj = t.get(j, j, j).re.max(0.0);
        let norm_sq = libm::cbrt(tjjj);
        out[j * n + j] = norm_sq;
        for k in 0..n {
            if k == j {
                continue;
            }
            let tjjk = t.get(j, j, k).re.max(0.0);
            if tol.is_zero(tjjj) {
                if !tol.is_zero(tjjk) {
                    return Err(Error::ZeroVector { index: j });
                }
                continue;
            }
            out[j * n + k] = libm::sqrt(tjjk / norm_sq);
        }
    }
    Ok(out)
}

/// 1- and 2-products plus one `m`-product per basis cycle: enough data to
/// recover the Gramian up to the diagonal gauge.
///
/// This is also the interchange format consumed by reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminingSet {
    pub n: usize,
    /// `Δ(v_j) = ||v_j||^2`.
    pub norms: Vec<f64>,
    /// Row-major grid of `|<v_j, v_k>|`.
    pub moduli: Vec<f64>,
    pub cycle_products: Vec<MProduct>,
}

impl DeterminingSet {
    pub fn new(
        n: usize,
        norms: Vec<f64>,
        moduli: Vec<f64>,
        cycle_products: Vec<MProduct>,
    ) -> Result<Self> {
        if norms.len() != n || moduli.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: norms.len(),
            });
        }
        if !norms
            .iter()
            .chain(&moduli)
            .all(|x| x.is_finite() && *x >= 0.0)
        {
            return Err(Error::InvalidInput(
                "norms and moduli must be finite and nonnegative",
            ));
        }
        for p in &cycle_products {
            ProductIndex::new(p.indices.clone(), n)?;
            if !crate::frame::is_finite(p.value) {
                return Err(Error::NonFinite);
            }
        }
        Ok(DeterminingSet {
            n,
            norms,
            moduli,
            cycle_products,
        })
    }

    pub fn modulus(&self, j: usize, k: usize) -> f64 {
        if j == k {
            self.norms[j]
        } else {
            self.moduli[j * self.n + k]
        }
    }

    /// `Δ(v_j, v_k) = |<v_j, v_k>|^2`.
    pub fn two_product(&self, j: usize, k: usize) -> f64 {
        let m = self.modulus(j, k);
        m * m
    }

    /// Frame graph read off the 2-products.
    pub fn graph(&self, tol: &Tolerance) -> FrameGraph {
        let mut g = FrameGraph::empty(self.n);
        for j in 0..self.n {
            for k in j + 1..self.n {
                let m = self.moduli[j * self.n + k].max(self.moduli[k * self.n + j]);
                if !tol.is_zero(m) {
                    g.add_edge(j, k).expect("indices in range");
                }
            }
        }
        g
    }

    pub fn cycle_product(&self, indices: &[usize]) -> Option<Scalar> {
        self.cycle_products
            .iter()
            .find(|p| p.indices == indices)
            .map(|p| p.value)
    }
}

fn products_for_basis(g: &GramMatrix, basis: &CycleBasis, tol: &Tolerance) -> DeterminingSet {
    let n = g.n();
    let moduli = (0..n * n)
        .map(|i| {
            let (j, k) = (i / n, i % n);
            let m = g.modulus(j, k);
            if j != k && tol.is_zero(m) {
                0.0
            } else {
                m
            }
        })
        .collect();
    let cycle_products = basis
        .cycles
        .iter()
        .map(|c| MProduct {
            indices: c.vertices().to_vec(),
            value: m_product(g, c.vertices()).expect("cycle indices in range"),
        })
        .collect();
    DeterminingSet {
        n,
        norms: (0..n).map(|j| g.get(j, j).re).collect(),
        moduli,
        cycle_products,
    }
}

/// All 1- and 2-products plus the `m`-products of the fundamental cycles of
/// the canonical spanning forest.
pub fn determining_set(g: &GramMatrix, tol: &Tolerance) -> DeterminingSet {
    let graph = crate::graph::build_frame_graph(g, tol);
    let forest = spanning_forest(&graph);
    products_for_basis(g, &fundamental_cycles(&graph, &forest), tol)
}

/// Like [`determining_set`] but using only 3-products, when the triangles
/// span the cycle space of the frame graph.
pub fn triangle_determining_set(g: &GramMatrix, tol: &Tolerance) -> Option<DeterminingSet> {
    let graph = crate::graph::build_frame_graph(g, tol);
    triangle_basis(&graph).map(|basis| products_for_basis(g, &basis, tol))
}

/// Exact solve of `A x = b` over the rationals, where `A` is given by
/// columns. Returns an integer solution or `None` when none exists.
fn integer_combination(columns: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let rows = target.len();
    let cols = columns.len();
    let mut a: Vec<Vec<Ratio<i128>>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Ratio<i128>> = columns
                .iter()
                .map(|c| Ratio::from_integer(c[r] as i128))
                .collect();
            row.push(Ratio::from_integer(target[r] as i128));
            row
        })
        .collect();
    let zero = Ratio::from_integer(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != zero) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != zero {
                let f = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| a[i][cols] != zero) {
        return None;
    }
    let mut x = vec![0i64; cols];
    for (i, &c) in pivots.iter().enumerate() {
        let v = a[i][cols];
        if !v.is_integer() {
            return None;
        }
        x[c] = i64::try_from(v.to_integer()).ok()?;
    }
    Some(x)
}

fn rotation_match(a: &[usize], b: &[usize]) -> Option<bool> {
    let m = a.len();
    if m != b.len() || m == 0 {
        return None;
    }
    for s in 0..m {
        if (0..m).all(|i| a[(s + i) % m] == b[i]) {
            return Some(false);
        }
        if (0..m).all(|i| a[(s + m - i) % m] == b[i]) {
            return Some(true);
        }
    }
    None
}

/// Computes the `m`-product of `target` from the 2-products and the basis
/// cycle products of `set`.
///
/// The target, as an oriented cycle, is written as an integer combination
/// `Σ λ_i C_i` of the basis cycles. Its modulus is the product of the edge
/// moduli along it and its phase is `Π (Δ_{C_i} / |Δ_{C_i}|)^{λ_i}`. For
/// example `Δ(1,2,3,4) = Δ(1,2,3) Δ(1,3,4) / Δ(1,3)`.
pub fn derive_product(set: &DeterminingSet, target: &[usize], tol: &Tolerance) -> Result<Scalar> {
    for p in &set.cycle_products {
        match rotation_match(&p.indices, target) {
            Some(false) => return Ok(p.value),
            Some(true) => return Ok(p.value.conj()),
            None => {}
        }
    }
    let graph = set.graph(tol);
    let target = Cycle::new(&graph, target.to_vec())?;
    let forest = spanning_forest(&graph);
    let chords = ChordIndex::new(&graph, &forest);
    let basis: Vec<Cycle> = set
        .cycle_products
        .iter()
        .map(|p| Cycle::new(&graph, p.indices.clone()))
        .collect::<Result<_>>()?;

    let mut echelon = Gf2Echelon::new();
    for c in &basis {
        echelon.insert(chords.parity(c));
    }
    if echelon
        .reduce(chords.parity(&target))
        .iter()
        .any(|&w| w != 0)
    {
        return Err(Error::NotInSpan);
    }
    let columns: Vec<Vec<i64>> = basis.iter().map(|c| chords.signed(c)).collect();
    let lambda = integer_combination(&columns, &chords.signed(&target)).ok_or(Error::NotInSpan)?;

    let modulus: f64 = target.steps().map(|(a, b)| set.modulus(a, b)).product();
    let mut phase = ONE;
    for (p, &l) in set.cycle_products.iter().zip(&lambda) {
        if l == 0 {
            continue;
        }
        let norm = p.value.norm();
        if tol.is_zero(norm) {
            return Err(Error::DivisionByZero {
                cycle: p.indices.clone(),
            });
        }
        let unit = p.value / norm;
        let unit = if l > 0 { unit } else { unit.conj() };
        phase *= unit.powu(l.unsigned_abs() as u32);
    }
    Ok(phase * modulus)
}

/// True iff every group is an orthonormal basis of `C^d` and vectors from
/// different groups satisfy `|<v, w>|^2 = 1/d`.
pub fn check_mubs(groups: &[Frame], tol: &Tolerance) -> Result<bool> {
    let Some(first) = groups.first() else {
        return Ok(true);
    };
    let d = first.dim();
    for group in groups {
        if group.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: group.dim(),
            });
        }
        if group.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: group.len(),
            });
        }
    }
    let thr = tol.threshold(1.0);
    for group in groups {
        let g = gram(group);
        for j in 0..d {
            for k in 0..d {
                let target = if j == k { ONE } else { Scalar::new(0.0, 0.0) };
                if (g.get(j, k) - target).norm() > thr {
                    return Ok(false);
                }
            }
        }
    }
    let unbiased = 1.0 / d as f64;
    for (r, a) in groups.iter().enumerate() {
        for b in &groups[r + 1..] {
            for v in a.vectors() {
                for w in b.vectors() {
                    let ip: Scalar = v.iter().zip(w).map(|(x, y)| x * y.conj()).sum();
                    if !tol.close(ip.norm_sqr(), unbiased) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
