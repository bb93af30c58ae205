//! Human-readable output. Indices here are 1-based.

use std::fmt::Write;

use frameq_core::harmonic::{anomalies, CensusRow};
use frameq_core::{Frame, FrameGraph, GramMatrix, Scalar};

use crate::io::{Complex, ProductsFile, Status, VerdictFile, WitnessFile};
use crate::selftest::Report;

fn c(z: Scalar) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn cp(z: Complex) -> String {
    c(Scalar::new(z[0], z[1]))
}

fn one_based(v: &[usize]) -> String {
    v.iter()
        .map(|x| (x + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn gram(g: &GramMatrix) -> String {
    let mut s = format!("Gram matrix, n = {} (rows and columns 1-based)\n", g.n());
    for j in 0..g.n() {
        let row: Vec<String> = g.row(j).iter().map(|&z| c(z)).collect();
        let _ = writeln!(s, "{:>3}: {}", j + 1, row.join("  "));
    }
    s
}

pub fn frame(f: &Frame) -> String {
    let mut s = format!("{} vectors in C^{} (1-based)\n", f.len(), f.dim());
    for (j, v) in f.vectors().iter().enumerate() {
        let coords: Vec<String> = v.iter().map(|&z| c(z)).collect();
        let _ = writeln!(s, "v{}: {}", j + 1, coords.join("  "));
    }
    s
}

pub fn graph(g: &FrameGraph) -> String {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|(j, k)| format!("{}-{}", j + 1, k + 1))
        .collect();
    format!(
        "frame graph on {} vertices (1-based), {} edges, {} components\nedges: {}\n",
        g.n(),
        g.edge_count(),
        g.component_count(),
        edges.join(" ")
    )
}

pub fn products(p: &ProductsFile) -> String {
    let mut s = format!("{} vectors (indices 1-based)\nnorms: ", p.n);
    let norms: Vec<String> = p.norms.iter().map(|x| format!("{x:.6}")).collect();
    let _ = writeln!(s, "{}", norms.join(" "));
    for c in &p.cycles {
        let _ = writeln!(s, "Delta({}) = {}", one_based(&c.indices), cp(c.value));
    }
    s
}

pub fn verdict(v: &VerdictFile) -> String {
    let answer = match (v.status, v.equivalent) {
        (Status::Unknown, _) | (_, None) => "unknown",
        (_, Some(true)) => "yes",
        (_, Some(false)) => "no",
    };
    let mut s = format!("equivalent: {answer} (indices 1-based)\n");
    if let Some(perm) = &v.permutation {
        let pairs: Vec<String> = perm
            .iter()
            .enumerate()
            .map(|(v, u)| format!("{}->{}", v + 1, u + 1))
            .collect();
        let _ = writeln!(s, "permutation (second -> first): {}", pairs.join(" "));
    }
    if let Some(phases) = &v.phases {
        for (j, &z) in phases.iter().enumerate() {
            let _ = writeln!(s, "c{} = {}", j + 1, cp(z));
        }
    }
    if let Some(q) = &v.q_recipe {
        for ((&a, &b), &z) in q.domain.iter().zip(&q.image).zip(&q.scalars) {
            let _ = writeln!(s, "Q v{} = {} w{}", a + 1, cp(z), b + 1);
        }
    }
    match &v.witness {
        Some(WitnessFile::Entry { row, col }) => {
            let _ = writeln!(s, "witness: entry ({}, {})", row + 1, col + 1);
        }
        Some(WitnessFile::Cycle {
            indices,
            left,
            right,
        }) => {
            let _ = writeln!(
                s,
                "witness: Delta({}) = {} vs {}",
                one_based(indices),
                cp(*left),
                cp(*right)
            );
        }
        Some(WitnessFile::SearchExhausted { nodes }) => {
            let _ = writeln!(s, "search visited {nodes} nodes");
        }
        None => {}
    }
    s
}

pub fn census_header() -> String {
    format!(
        "{:>4} {:>4} {:>12} {:>12} {:>12} {:>10} {:>10}  status\n",
        "n", "d", "translation", "automorph.", "affine", "unitary", "projective"
    )
}

pub fn census_row(r: &CensusRow) -> String {
    let count = |x: Option<frameq_core::harmonic::ClassCount>| {
        x.map(|c| c.to_string()).unwrap_or_else(|| "-".into())
    };
    let mut s = format!(
        "{:>4} {:>4} {:>12} {:>12} {:>12} {:>10} {:>10}  {}",
        r.n,
        r.d,
        r.translation_orbits,
        r.automorphism_orbits,
        r.affine_orbits,
        count(r.exact_unitary),
        count(r.exact_projective),
        r.status()
    );
    for a in anomalies(r) {
        let _ = write!(s, " ({a})");
    }
    s.push('\n');
    s
}

pub fn selftest(r: &Report) -> String {
    let mut s = format!(
        "seed {}: {} passed, {} failed\n",
        r.seed, r.passed, r.failed
    );
    for f in &r.failures {
        let _ = writeln!(s, "  {f}");
    }
    s
}
