//! Equivalence up to reindexing: find `π` (and phases) with
//! `w_{π(j)} = c_j U v_j`.
//!
//! Backtracking assigns the indices of the second Gramian in increasing order
//! and tries candidates from the first in increasing order, so the first
//! permutation found is the lexicographically least one. Candidates are
//! pruned by row signatures (diagonal plus sorted row moduli) and by
//! incremental entry checks against everything already placed. In projective
//! mode the phase constraints are tracked in a union-find whose links carry
//! relative phases, so inconsistent cycles are rejected as soon as they close.

use alloc::vec;
use alloc::vec::Vec;

use super::{same_size, unit, Verdict, Witness};
use crate::error::{Error, Result};
use crate::frame::{apply_gauge, GramMatrix, PhaseVector, Scalar, Tolerance, ONE};

/// Default cap on backtracking nodes.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Unitary,
    Projective,
}

fn signature(g: &GramMatrix, j: usize) -> (f64, Vec<f64>) {
    let mut row: Vec<f64> = (0..g.n())
        .filter(|&k| k != j)
        .map(|k| g.modulus(j, k))
        .collect();
    row.sort_by(f64::total_cmp);
    (g.get(j, j).re, row)
}

fn signatures_match(a: &(f64, Vec<f64>), b: &(f64, Vec<f64>), thr: f64) -> bool {
    (a.0 - b.0).abs() <= thr && a.1.iter().zip(&b.1).all(|(x, y)| (x - y).abs() <= thr)
}

/// Union-find over indices whose links carry unit scalars: `c_v = pot[v] *
/// c_{parent[v]}`. No path compression, so merges can be undone.
struct PhaseForest {
    parent: Vec<usize>,
    pot: Vec<Scalar>,
    size: Vec<usize>,
}

impl PhaseForest {
    fn new(n: usize) -> Self {
        PhaseForest {
            parent: (0..n).collect(),
            pot: vec![ONE; n],
            size: vec![1; n],
        }
    }

    /// Root of `v` and `c_v / c_root`.
    fn find(&self, mut v: usize) -> (usize, Scalar) {
        let mut ph = ONE;
        while self.parent[v] != v {
            ph *= self.pot[v];
            v = self.parent[v];
        }
        (v, ph)
    }

    /// Imposes `c_a / c_b = r`. Returns `Err(())` on a contradiction,
    /// `Ok(Some(x))` when root `x` was attached, `Ok(None)` when already
    /// consistent.
    fn relate(
        &mut self,
        a: usize,
        b: usize,
        r: Scalar,
        slack: f64,
    ) -> core::result::Result<Option<usize>, ()> {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return if (pa / pb - r).norm() <= slack {
                Ok(None)
            } else {
                Err(())
            };
        }
        let (child, root, pot) = if self.size[ra] >= self.size[rb] {
            (rb, ra, pa / (pb * r))
        } else {
            (ra, rb, r * pb / pa)
        };
        self.parent[child] = root;
        self.pot[child] = unit(pot);
        self.size[root] += self.size[child];
        Ok(Some(child))
    }

    fn undo(&mut self, child: usize) {
        let root = self.parent[child];
        self.size[root] -= self.size[child];
        self.parent[child] = child;
        self.pot[child] = ONE;
    }
}

struct Search<'a> {
    g1: &'a GramMatrix,
    g2: &'a GramMatrix,
    tol: &'a Tolerance,
    mode: Mode,
    thr: f64,
    candidates: Vec<Vec<usize>>,
    perm: Vec<usize>,
    used: Vec<bool>,
    phases: PhaseForest,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, v: usize) -> Result<Option<Verdict>> {
        let n = self.g2.n();
        if v == n {
            return Ok(self.certify());
        }
        for i in 0..self.candidates[v].len() {
            let u = self.candidates[v][i];
            if self.used[u] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded { nodes: self.nodes });
            }
            let mut merged = Vec::new();
            if self.place(v, u, &mut merged) {
                self.perm[v] = u;
                self.used[u] = true;
                let found = self.run(v + 1)?;
                self.used[u] = false;
                if found.is_some() {
                    return Ok(found);
                }
            }
            for &x in merged.iter().rev() {
                self.phases.undo(x);
            }
        }
        Ok(None)
    }

    /// Checks `g2` row `v` against `g1` row `u` on all placed indices.
    fn place(&mut self, v: usize, u: usize, merged: &mut Vec<usize>) -> bool {
        for w in 0..v {
            let a = self.g1.get(self.perm[w], u);
            let b = self.g2.get(w, v);
            match self.mode {
                Mode::Unitary => {
                    if (a - b).norm() > self.thr {
                        return false;
                    }
                }
                Mode::Projective => {
                    if (a.norm() - b.norm()).abs() > self.thr {
                        return false;
                    }
                    if self.tol.is_zero(b.norm()) {
                        continue;
                    }
                    // conj(c_w) c_v a = b
                    let slack = self.thr / b.norm();
                    match self.phases.relate(v, w, unit(b / a), slack) {
                        Ok(Some(x)) => merged.push(x),
                        Ok(None) => {}
                        Err(()) => return false,
                    }
                }
            }
        }
        true
    }

    fn certify(&self) -> Option<Verdict> {
        let n = self.g2.n();
        let reindexed = self.g1.permuted(&self.perm).ok()?;
        let phases = match self.mode {
            Mode::Unitary => None,
            Mode::Projective => Some(PhaseVector::from_raw(
                (0..n).map(|v| self.phases.find(v).1).collect(),
            )),
        };
        let image = match &phases {
            Some(c) => apply_gauge(&reindexed, c).ok()?,
            None => reindexed,
        };
        image
            .first_mismatch(self.g2, self.tol)
            .is_none()
            .then(|| Verdict::yes(phases, Some(self.perm.clone())))
    }
}

fn search(
    g1: &GramMatrix,
    g2: &GramMatrix,
    tol: &Tolerance,
    budget: u64,
    mode: Mode,
) -> Result<Verdict> {
    same_size(g1, g2)?;
    let n = g1.n();
    let thr = tol.threshold(g1.max_modulus().max(g2.max_modulus()));
    let sig1: Vec<_> = (0..n).map(|u| signature(g1, u)).collect();
    let candidates = (0..n)
        .map(|v| {
            let s = signature(g2, v);
            (0..n)
                .filter(|&u| signatures_match(&sig1[u], &s, thr))
                .collect()
        })
        .collect();
    let mut s = Search {
        g1,
        g2,
        tol,
        mode,
        thr,
        candidates,
        perm: vec![usize::MAX; n],
        used: vec![false; n],
        phases: PhaseForest::new(n),
        nodes: 0,
        budget,
    };
    Ok(match s.run(0)? {
        Some(v) => v,
        None => Verdict::no(Witness::SearchExhausted { nodes: s.nodes }),
    })
}

/// Unitary equivalence up to reindexing: a permutation with
/// `g1.permuted(π) = g2`.
pub fn unitary_equiv_reindex(
    g1: &GramMatrix,
    g2: &GramMatrix,
    tol: &Tolerance,
    budget: u64,
) -> Result<Verdict> {
    search(g1, g2, tol, budget, Mode::Unitary)
}

/// Projective unitary equivalence up to reindexing: a permutation `π` and
/// phases `c` with `apply_gauge(g1.permuted(π), c) = g2`.
///
/// Returns `SearchBudgetExceeded` when the node budget runs out, which means
/// the answer is unknown rather than negative.
pub fn projective_equiv_reindex(
    g1: &GramMatrix,
    g2: &GramMatrix,
    tol: &Tolerance,
    budget: u64,
) -> Result<Verdict> {
    search(g1, g2, tol, budget, Mode::Projective)
}
