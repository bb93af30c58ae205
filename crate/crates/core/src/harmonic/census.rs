//! Exact equivalence class counts for cyclic harmonic frames.
//!
//! One frame per automorphism orbit (unitary) or affine orbit (projective)
//! is built; every pair of representatives is then tested with the
//! reindexing search and equivalent ones are merged.

use alloc::vec::Vec;
use core::fmt;

use super::orbits::{orbit_representatives, Action, SubsetUniverse};
use super::{harmonic_frame, AbelianGroup, SubsetJ};
use crate::equivalence::{projective_equiv_reindex, unitary_equiv_reindex};
use crate::error::{Error, Result};
use crate::frame::{gram, GramMatrix, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Orbits,
    Exact,
}

/// Number of classes, as a range when some pairs could not be decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCount {
    pub lo: usize,
    pub hi: usize,
}

impl ClassCount {
    pub fn exact(&self) -> Option<usize> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

impl fmt::Display for ClassCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairOutcome {
    Equivalent,
    Inequivalent,
    Unknown,
}

/// An exact count larger than the orbit count it should be bounded by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anomaly {
    UnitaryExceedsAutomorphism { exact: usize, orbits: usize },
    ProjectiveExceedsAffine { exact: usize, orbits: usize },
}

impl fmt::Display for Anomaly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anomaly::UnitaryExceedsAutomorphism { exact, orbits } => {
                write!(f, "exact_unitary {exact} > automorphism_orbits {orbits}")
            }
            Anomaly::ProjectiveExceedsAffine { exact, orbits } => {
                write!(f, "exact_projective {exact} > affine_orbits {orbits}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub d: usize,
    pub translation_orbits: usize,
    pub automorphism_orbits: usize,
    pub affine_orbits: usize,
    pub exact_unitary: Option<ClassCount>,
    pub exact_projective: Option<ClassCount>,
}

impl CensusRow {
    pub fn status(&self) -> &'static str {
        let counts = [self.exact_unitary, self.exact_projective];
        if !anomalies(self).is_empty() {
            "anomaly"
        } else if counts.iter().flatten().any(|c| c.exact().is_none()) {
            "unknown"
        } else if counts.iter().all(Option::is_some) {
            "exact"
        } else {
            "orbits"
        }
    }
}

/// Exact counts exceeding their orbit bounds. The lower end of a range is
/// used, so only certain violations are reported.
pub fn anomalies(row: &CensusRow) -> Vec<Anomaly> {
    let mut out = Vec::new();
    if let Some(c) = row.exact_unitary {
        if c.lo > row.automorphism_orbits {
            out.push(Anomaly::UnitaryExceedsAutomorphism {
                exact: c.lo,
                orbits: row.automorphism_orbits,
            });
        }
    }
    if let Some(c) = row.exact_projective {
        if c.lo > row.affine_orbits {
            out.push(Anomaly::ProjectiveExceedsAffine {
                exact: c.lo,
                orbits: row.affine_orbits,
            });
        }
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Joins under the smaller root, so roots are least members.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

fn count_classes(
    grams: &[GramMatrix],
    projective: bool,
    tol: &Tolerance,
    budget: u64,
    run_pairs: &impl Fn(usize, &(dyn Fn(usize) -> PairOutcome + Sync)) -> Vec<PairOutcome>,
) -> ClassCount {
    let k = grams.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .collect();
    let job = |i: usize| {
        let (a, b) = pairs[i];
        let verdict = if projective {
            projective_equiv_reindex(&grams[a], &grams[b], tol, budget)
        } else {
            unitary_equiv_reindex(&grams[a], &grams[b], tol, budget)
        };
        match verdict {
            Ok(v) if v.equivalent => PairOutcome::Equivalent,
            Ok(_) => PairOutcome::Inequivalent,
            Err(_) => PairOutcome::Unknown,
        }
    };
    let outcomes = run_pairs(pairs.len(), &job);
    let mut sure = UnionFind((0..k).collect());
    let mut maybe = UnionFind((0..k).collect());
    for (&(a, b), o) in pairs.iter().zip(&outcomes) {
        match o {
            PairOutcome::Equivalent => {
                sure.union(a, b);
                maybe.union(a, b);
            }
            PairOutcome::Unknown => maybe.union(a, b),
            PairOutcome::Inequivalent => {}
        }
    }
    ClassCount {
        lo: maybe.classes(),
        hi: sure.classes(),
    }
}

fn frames_for(n: usize, reps: &[Vec<usize>]) -> Result<Vec<GramMatrix>> {
    let group = AbelianGroup::cyclic(n)?;
    reps.iter()
        .map(|r| {
            Ok(gram(&harmonic_frame(
                &group,
                &SubsetJ::new(&group, r.clone())?,
            )))
        })
        .collect()
}

/// Census row for cyclic harmonic frames of `n` vectors in `C^d`, with pair
/// checks dispatched through `run_pairs(count, job)`, which must return
/// `job(i)` for `i` in `0..count`, in order.
pub fn census_with<F>(
    n: usize,
    d: usize,
    mode: CensusMode,
    budget: u64,
    tol: &Tolerance,
    run_pairs: F,
) -> Result<CensusRow>
where
    F: Fn(usize, &(dyn Fn(usize) -> PairOutcome + Sync)) -> Vec<PairOutcome>,
{
    let universe = SubsetUniverse::Generating;
    let translation = orbit_representatives(n, d, Action::Translation, universe)?;
    let automorphism = orbit_representatives(n, d, Action::Automorphism, universe)?;
    let affine = orbit_representatives(n, d, Action::Affine, universe)?;
    let mut row = CensusRow {
        n,
        d,
        translation_orbits: translation.len(),
        automorphism_orbits: automorphism.len(),
        affine_orbits: affine.len(),
        exact_unitary: None,
        exact_projective: None,
    };
    if mode == CensusMode::Exact {
        if budget == 0 {
            return Err(Error::InvalidInput(
                "exact census needs a positive node budget",
            ));
        }
        let unitary = frames_for(n, &automorphism)?;
        row.exact_unitary = Some(count_classes(&unitary, false, tol, budget, &run_pairs));
        let projective = frames_for(n, &affine)?;
        row.exact_projective = Some(count_classes(&projective, true, tol, budget, &run_pairs));
    }
    Ok(row)
}

/// Serial [`census_with`].
pub fn census(
    n: usize,
    d: usize,
    mode: CensusMode,
    budget: u64,
    tol: &Tolerance,
) -> Result<CensusRow> {
    census_with(n, d, mode, budget, tol, |count, job| {
        (0..count).map(job).collect()
    })
}
