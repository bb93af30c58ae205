//! Orbits of `d`-subsets of `Z_n` under translations `j -> j - b`,
//! automorphisms `j -> u j` (`u` a unit) and the affine maps combining both.
//!
//! Subsets are bitmasks. Subsets are scanned in lexicographic order; the
//! first one in an unvisited orbit triggers a walk over the whole orbit,
//! which marks every image visited.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::gcd;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Translation,
    Automorphism,
    Affine,
}

/// Which subsets are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SubsetUniverse {
    /// Subsets generating `Z_n`, i.e. `gcd(J ∪ {n}) = 1`; exactly those whose
    /// harmonic frame has `n` distinct vectors. An orbit counts when it
    /// contains such a subset.
    #[default]
    Generating,
    All,
}

/// Largest `n` supported by the bitmask representation.
pub const MAX_ORDER: usize = 63;

struct Cyclic {
    n: usize,
    full: u64,
    units: Vec<usize>,
}

impl Cyclic {
    fn new(n: usize) -> Self {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let units = (1..=n)
            .filter(|&u| gcd(u % n, n) == 1)
            .map(|u| u % n)
            .collect();
        Cyclic { n, full, units }
    }

    fn rotate(&self, m: u64, b: usize) -> u64 {
        if b == 0 {
            m
        } else {
            ((m >> b) | (m << (self.n - b))) & self.full
        }
    }

    fn multiply(&self, m: u64, u: usize) -> u64 {
        let mut out = 0;
        let mut rest = m;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << (j * u % self.n);
        }
        out
    }

    fn images(&self, m: u64, action: Action, out: &mut Vec<u64>) {
        out.clear();
        match action {
            Action::Translation => out.extend((0..self.n).map(|b| self.rotate(m, b))),
            Action::Automorphism => out.extend(self.units.iter().map(|&u| self.multiply(m, u))),
            Action::Affine => {
                for &u in &self.units {
                    let x = self.multiply(m, u);
                    out.extend((0..self.n).map(|b| self.rotate(x, b)));
                }
            }
        }
    }

    fn generates(&self, m: u64) -> bool {
        let mut g = self.n;
        let mut rest = m;
        while rest != 0 && g != 1 {
            g = gcd(g, rest.trailing_zeros() as usize);
            rest &= rest - 1;
        }
        g == 1
    }
}

/// For equal-size subsets, `a` precedes `b` in lexicographic order of their
/// sorted member lists iff the lowest differing element lies in `a`.
fn lex_less(a: u64, b: u64) -> bool {
    let x = a ^ b;
    x != 0 && a & (x & x.wrapping_neg()) != 0
}

fn members(m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    let mut rest = m;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

enum Visited {
    Bits(Vec<u64>),
    Set(BTreeSet<u64>),
}

impl Visited {
    fn new(n: usize) -> Self {
        if n <= 26 {
            Visited::Bits(vec![0; (1usize << n).div_ceil(64)])
        } else {
            Visited::Set(BTreeSet::new())
        }
    }

    fn contains(&self, m: u64) -> bool {
        match self {
            Visited::Bits(b) => b[(m / 64) as usize] >> (m % 64) & 1 == 1,
            Visited::Set(s) => s.contains(&m),
        }
    }

    fn insert(&mut self, m: u64) {
        match self {
            Visited::Bits(b) => b[(m / 64) as usize] |= 1 << (m % 64),
            Visited::Set(s) => {
                s.insert(m);
            }
        }
    }
}

/// Masks of all `d`-subsets of `{0..n}` in lexicographic order of their
/// sorted member lists.
fn for_each_subset(n: usize, d: usize, mut f: impl FnMut(u64)) {
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        f(idx.iter().fold(0u64, |m, &j| m | 1 << j));
        let Some(i) = (0..d).rev().find(|&i| idx[i] < n - d + i) else {
            return;
        };
        idx[i] += 1;
        for k in i + 1..d {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

fn check(n: usize, d: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidInput("orbit counting needs 1 <= n <= 63"));
    }
    if d == 0 || d > n {
        return Err(Error::InvalidInput("subset size must satisfy 1 <= d <= n"));
    }
    Ok(())
}

/// One representative per orbit of `d`-subsets of `Z_n`: the
/// lexicographically least subset of the orbit lying in `universe`.
/// Representatives are listed in lexicographic order.
pub fn orbit_representatives(
    n: usize,
    d: usize,
    action: Action,
    universe: SubsetUniverse,
) -> Result<Vec<Vec<usize>>> {
    check(n, d)?;
    let z = Cyclic::new(n);
    let mut visited = Visited::new(n);
    let mut reps = Vec::new();
    let mut images = Vec::new();
    let mut stack = Vec::new();
    for_each_subset(n, d, |m| {
        if visited.contains(m) {
            return;
        }
        // The action is a group, so one application of every element
        // already reaches the whole orbit.
        let mut best: Option<u64> = None;
        stack.clear();
        stack.push(m);
        visited.insert(m);
        z.images(m, action, &mut images);
        for &x in &images {
            if !visited.contains(x) {
                visited.insert(x);
                stack.push(x);
            }
        }
        for &x in &stack {
            let counted = match universe {
                SubsetUniverse::All => true,
                SubsetUniverse::Generating => z.generates(x),
            };
            if counted && best.is_none_or(|b| lex_less(x, b)) {
                best = Some(x);
            }
        }
        if let Some(b) = best {
            reps.push(b);
        }
    });
    reps.sort_by(|&a, &b| {
        if a == b {
            core::cmp::Ordering::Equal
        } else if lex_less(a, b) {
            core::cmp::Ordering::Less
        } else {
            core::cmp::Ordering::Greater
        }
    });
    Ok(reps.into_iter().map(members).collect())
}

pub fn orbit_count(n: usize, d: usize, action: Action, universe: SubsetUniverse) -> Result<usize> {
    orbit_representatives(n, d, action, universe).map(|r| r.len())
}

/// Orbits of generating `d`-subsets of `Z_n` under translation.
pub fn translation_orbit_count(n: usize, d: usize) -> Result<usize> {
    orbit_count(n, d, Action::Translation, SubsetUniverse::Generating)
}

/// Orbits of generating `d`-subsets of `Z_n` under multiplication by units.
pub fn automorphism_orbit_count(n: usize, d: usize) -> Result<usize> {
    orbit_count(n, d, Action::Automorphism, SubsetUniverse::Generating)
}

/// Orbits of generating `d`-subsets of `Z_n` under affine maps.
pub fn affine_orbit_count(n: usize, d: usize) -> Result<usize> {
    orbit_count(n, d, Action::Affine, SubsetUniverse::Generating)
}
