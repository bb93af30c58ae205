//! Harmonic frames of finite abelian groups and their equivalence classes.
//!
//! For `J ⊂ Ĝ` with `|J| = d`, the harmonic frame `Φ_J = (ξ|_J)_{ξ ∈ Ĝ}` has
//! one vector per character. Characters and group elements are both indexed
//! by mixed-radix tuples, last factor fastest.

mod census;
mod orbits;

use alloc::vec::Vec;

pub use census::{
    anomalies, census, census_with, Anomaly, CensusMode, CensusRow, ClassCount, PairOutcome,
};
pub use orbits::{
    affine_orbit_count, automorphism_orbit_count, orbit_count, orbit_representatives,
    translation_orbit_count, Action, SubsetUniverse,
};

use crate::error::{Error, Result};
use crate::frame::{Frame, Scalar};

/// `Z_{n_1} x ... x Z_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<usize>,
    order: usize,
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl AbelianGroup {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a group needs at least one factor"));
        }
        if factors.contains(&0) {
            return Err(Error::InvalidInput("group factors must be positive"));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f))
            .ok_or(Error::InvalidInput("group order overflows"))?;
        Ok(AbelianGroup { factors, order })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(alloc::vec![n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Mixed-radix digits of element `index`.
    pub fn element(&self, mut index: usize) -> Vec<usize> {
        let mut digits = alloc::vec![0; self.factors.len()];
        for (slot, &f) in digits.iter_mut().zip(&self.factors).rev() {
            *slot = index % f;
            index /= f;
        }
        digits
    }

    fn exponent(&self) -> usize {
        self.factors.iter().fold(1, |l, &f| l / gcd(l, f) * f)
    }
}

/// A `d`-subset of the group's index set, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SubsetJ {
    members: Vec<usize>,
}

impl SubsetJ {
    pub fn new(group: &AbelianGroup, members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("subset must be nonempty"));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "subset members must be strictly increasing",
            ));
        }
        if let Some(&index) = members.iter().find(|&&j| j >= group.order()) {
            return Err(Error::IndexOutOfRange {
                index,
                n: group.order(),
            });
        }
        Ok(SubsetJ { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `Φ_J`: vector `a` has coordinates `ξ_a(g) = exp(2πi Σ_i a_i g_i / n_i)`
/// for `g ∈ J`. Exponents are reduced exactly modulo the group exponent
/// before the single floating-point evaluation.
pub fn harmonic_frame(group: &AbelianGroup, j: &SubsetJ) -> Frame {
    let l = group.exponent();
    let scale: Vec<usize> = group.factors.iter().map(|&f| l / f).collect();
    let elements: Vec<Vec<usize>> = j.members.iter().map(|&g| group.element(g)).collect();
    let vectors = (0..group.order())
        .map(|a| {
            let a = group.element(a);
            elements
                .iter()
                .map(|g| {
                    let e = a
                        .iter()
                        .zip(g)
                        .zip(&scale)
                        .fold(0usize, |acc, ((&x, &y), &s)| (acc + (x * y % l) * s) % l);
                    root_of_unity(e, l)
                })
                .collect()
        })
        .collect();
    Frame::new(j.len(), vectors).expect("character values are finite")
}

/// `exp(2πi e / l)`, evaluated on the nearest quarter turn for accuracy.
fn root_of_unity(e: usize, l: usize) -> Scalar {
    let (q, r) = ((4 * e) / l, (4 * e) % l);
    let t = 2.0 * core::f64::consts::PI * r as f64 / (4 * l) as f64;
    let (s, c) = libm::sincos(t);
    match q % 4 {
        0 => Scalar::new(c, s),
        1 => Scalar::new(-s, c),
        2 => Scalar::new(-c, -s),
        _ => Scalar::new(s, -c),
    }
}
