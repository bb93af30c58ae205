//! Randomized planted checks behind `frameq selftest`.

use frameq_core::{
    apply_gauge, determining_set, gram, projective_equiv, projective_equiv_reindex,
    reconstruct_from_products, Frame, FreePhases, GramMatrix, PhaseVector, Scalar, Tolerance,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

/// Random frame of `n` vectors in `C^d`; with `sparse`, each coordinate is
/// zeroed with probability one half.
pub fn random_frame(rng: &mut impl Rng, n: usize, d: usize, sparse: bool) -> Frame {
    let vectors = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if sparse && rng.gen_bool(0.5) {
                        Scalar::new(0.0, 0.0)
                    } else {
                        Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    }
                })
                .collect()
        })
        .collect();
    Frame::new(d, vectors).expect("finite random frame")
}

pub fn random_phases(rng: &mut impl Rng, n: usize) -> PhaseVector {
    let angles: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    PhaseVector::from_angles(&angles)
}

fn check(name: &str, ok: Result<bool, frameq_core::Error>) -> Result<(), String> {
    match ok {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("{name}: wrong verdict")),
        Err(e) => Err(format!("{name}: {e}")),
    }
}

fn trial(rng: &mut ChaCha8Rng, tol: &Tolerance, budget: u64) -> Result<(), String> {
    let n = rng.gen_range(2..=8);
    let d = rng.gen_range(1..=4);
    let sparse = rng.gen_bool(0.3);
    let g = gram(&random_frame(rng, n, d, sparse));

    let gauged = apply_gauge(&g, &random_phases(rng, n)).map_err(|e| e.to_string())?;
    check(
        "gauge",
        projective_equiv(&g, &gauged, tol).map(|v| v.equivalent),
    )?;

    let set = determining_set(&g, tol);
    let rebuilt = reconstruct_from_products(&set, &FreePhases::new(), tol).map(|r| r.gram);
    check(
        "reconstruct",
        rebuilt
            .and_then(|r| projective_equiv(&g, &r, tol))
            .map(|v| v.equivalent),
    )?;

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let shuffled = g
        .permuted(&perm)
        .and_then(|p| apply_gauge(&p, &random_phases(rng, n)));
    check(
        "reindex",
        shuffled
            .and_then(|s| projective_equiv_reindex(&g, &s, tol, budget))
            .map(|v| v.equivalent),
    )?;

    if n >= 3 && d >= 2 {
        // dense frame, so the triangle 0-1-2 is present; a phase kick on one
        // edge changes its triple product
        let g = gram(&random_frame(rng, n, d, false));
        let kick = Scalar::from_polar(1.0, rng.gen_range(0.5..std::f64::consts::TAU - 0.5));
        let mut rows = g.rows();
        rows[0][1] *= kick;
        rows[1][0] = rows[0][1].conj();
        let bent = GramMatrix::from_rows(rows, tol).map_err(|e| e.to_string())?;
        check(
            "perturbation",
            projective_equiv(&g, &bent, tol).map(|v| !v.equivalent),
        )?;
    }
    Ok(())
}

pub fn run(seed: u64, trials: usize, tol: &Tolerance, budget: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        if let Err(e) = trial(&mut rng, tol, budget) {
            failures.push(format!("trial {t}: {e}"));
        }
    }
    Report {
        seed,
        trials,
        passed: trials - failures.len(),
        failed: failures.len(),
        failures,
    }
}
