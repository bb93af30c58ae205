#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::path::PathBuf;

use frameq_core::{Frame, Scalar};
use rand::Rng;
use serde_json::Value;
use tempfile::TempDir;

pub fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

pub fn cis(t: f64) -> Scalar {
    Scalar::from_polar(1.0, t)
}

pub struct Cli {
    pub dir: TempDir,
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

impl Cli {
    pub fn new() -> Self {
        Cli {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    pub fn file(&self, name: &str, contents: &str) -> String {
        let p: PathBuf = self.dir.path().join(name);
        std::fs::write(&p, contents).unwrap();
        p.to_str().unwrap().to_string()
    }

    pub fn run(&self, args: &[&str]) -> Output {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["frameq"];
        full.extend_from_slice(args);
        let code = frameq::run(full, &mut out, &mut err);
        Output {
            code,
            stdout: String::from_utf8(out).unwrap(),
            stderr: String::from_utf8(err).unwrap(),
        }
    }
}

pub fn frame_json(f: &Frame) -> String {
    serde_json::to_string(&frameq::io::FrameFile::from_frame(f)).unwrap()
}

pub fn gram_json(rows: &[Vec<Scalar>]) -> String {
    let entries: Vec<Vec<[f64; 2]>> = rows
        .iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    serde_json::json!({ "n": rows.len(), "entries": entries }).to_string()
}

/// Entry `(j, k)` of a Gram JSON value.
pub fn entry(v: &Value, j: usize, k: usize) -> Scalar {
    let e = &v["entries"][j][k];
    c(e[0].as_f64().unwrap(), e[1].as_f64().unwrap())
}

/// `v_j = e_j + e_{j+1}`, closing with `v_n = e_n + z e_1`.
pub fn cycle_frame(n: usize, z: Scalar) -> Frame {
    let vectors = (0..n)
        .map(|j| {
            let mut v = vec![c(0.0, 0.0); n];
            v[j] = c(1.0, 0.0);
            if j + 1 < n {
                v[j + 1] = c(1.0, 0.0);
            } else {
                v[0] = z;
            }
            v
        })
        .collect();
    Frame::new(n, vectors).unwrap()
}

/// Standard and Fourier bases of `C^2`.
pub fn two_bases() -> Frame {
    let s = FRAC_1_SQRT_2;
    Frame::from_real(2, &[&[1., 0.], &[0., 1.], &[s, s], &[s, -s]]).unwrap()
}

/// The standard basis and the bases `(ω^{k j^2 + l j} / √d)_j`, `l = 0..d`,
/// for `k = 0..count-1`: `count + 1` mutually unbiased bases for odd prime `d`.
/// For `d = 2`, the second extra basis is `(1, ±i)/√2`.
pub fn mub_bases(d: usize, count: usize) -> Vec<Frame> {
    let mut bases = vec![Frame::new(
        d,
        (0..d)
            .map(|l| {
                (0..d)
                    .map(|j| c(if j == l { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect(),
    )
    .unwrap()];
    let s = 1.0 / (d as f64).sqrt();
    for k in 0..count {
        let vectors = (0..d)
            .map(|l| {
                (0..d)
                    .map(|j| {
                        if d == 2 {
                            // (1, ±1) then (1, ±i)
                            let sign = if l == 0 { 1.0 } else { -1.0 };
                            if j == 0 {
                                c(s, 0.0)
                            } else if k == 0 {
                                c(sign * s, 0.0)
                            } else {
                                c(0.0, sign * s)
                            }
                        } else {
                            cis(TAU * ((k * j * j + l * j) % d) as f64 / d as f64) * s
                        }
                    })
                    .collect()
            })
            .collect();
        bases.push(Frame::new(d, vectors).unwrap());
    }
    bases
}

pub fn concat(frames: &[Frame]) -> Frame {
    let d = frames[0].dim();
    Frame::new(
        d,
        frames.iter().flat_map(|f| f.vectors().to_vec()).collect(),
    )
    .unwrap()
}

pub fn random_frame(rng: &mut impl Rng, n: usize, d: usize, density: f64) -> Frame {
    let vectors = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if rng.gen_bool(density) {
                        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    } else {
                        c(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    Frame::new(d, vectors).unwrap()
}

/// Haar-ish unitary by Gram-Schmidt on a random complex matrix, row-major.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> Vec<Scalar> {
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    while cols.len() < d {
        let mut v: Vec<Scalar> = (0..d)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        for u in &cols {
            let p: Scalar = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    (0..d * d).map(|i| cols[i % d][i / d]).collect()
}

pub fn random_phases(rng: &mut impl Rng, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| cis(rng.gen_range(0.0..TAU))).collect()
}

/// `c_j U v_j`.
pub fn rotate_and_gauge(rng: &mut impl Rng, f: &Frame) -> Frame {
    let u = random_unitary(rng, f.dim());
    f.transformed(f.dim(), &u)
        .unwrap()
        .scaled(&random_phases(rng, f.len()))
        .unwrap()
}
