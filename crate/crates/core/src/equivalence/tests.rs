use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::frame::{gram, Frame};
use crate::harmonic::{harmonic_frame, AbelianGroup, SubsetJ};
use crate::invariants::{determining_set, triple_products};

fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn printed_equiangular() -> GramMatrix {
    GramMatrix::from_real_rows(
        &[&[1.0, 0.5, 0.5], &[0.5, 1.0, 0.5], &[0.5, 0.5, 1.0]],
        &tol(),
    )
    .unwrap()
}

/// The family `G(a, b)` of Gramians projectively equivalent to the printed
/// equiangular one.
fn family_ab(a: Scalar, b: Scalar) -> GramMatrix {
    GramMatrix::from_rows(
        vec![
            vec![ONE, a.conj() * 0.5, (a * b).conj() * 0.5],
            vec![a * 0.5, ONE, b.conj() * 0.5],
            vec![a * b * 0.5, b * 0.5, ONE],
        ],
        &tol(),
    )
    .unwrap()
}

/// Standard and Fourier bases of `C^2`.
fn mub_frame() -> Frame {
    let s = 1.0 / sqrt(2.0);
    Frame::from_real(2, &[&[1., 0.], &[0., 1.], &[s, s], &[s, -s]]).unwrap()
}

/// Gramians matching all products of the two-basis frame.
fn family_abc(a: Scalar, b: Scalar, cc: Scalar) -> GramMatrix {
    let s = 1.0 / sqrt(2.0);
    let z = -(a * cc) / b;
    let zero = c(0.0, 0.0);
    GramMatrix::from_rows(
        vec![
            vec![ONE, zero, a.conj() * s, z.conj() * s],
            vec![zero, ONE, b.conj() * s, cc.conj() * s],
            vec![a * s, b * s, ONE, zero],
            vec![z * s, cc * s, zero, ONE],
        ],
        &tol(),
    )
    .unwrap()
}

fn cycle_frame(n: usize, z: Scalar) -> Frame {
    let vectors = (0..n)
        .map(|j| {
            let mut v = vec![c(0.0, 0.0); n];
            v[j] = ONE;
            if j + 1 < n {
                v[j + 1] = ONE;
            } else {
                v[0] = z;
            }
            v
        })
        .collect();
    Frame::new(n, vectors).unwrap()
}

fn harmonic(n: usize, members: &[usize]) -> GramMatrix {
    let g = AbelianGroup::cyclic(n).unwrap();
    gram(&harmonic_frame(
        &g,
        &SubsetJ::new(&g, members.to_vec()).unwrap(),
    ))
}

fn unit_random(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_polar(1.0, rng.gen_range(-3.2..3.2))
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Frame {
    let vectors = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    Frame::new(d, vectors).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> Vec<Scalar> {
    let m = DMatrix::from_fn(d, d, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let q = m.qr().q();
    (0..d * d).map(|i| q[(i / d, i % d)]).collect()
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

fn assert_certificate(g1: &GramMatrix, g2: &GramMatrix, v: &Verdict) {
    assert!(v.equivalent);
    let base = match &v.permutation {
        Some(p) => g1.permuted(p).unwrap(),
        None => g1.clone(),
    };
    let image = match &v.phases {
        Some(cs) => apply_gauge(&base, cs).unwrap(),
        None => base,
    };
    assert!(image.approx_eq(g2, &tol()));
}

#[test]
fn unitary_examples() {
    let g = printed_equiangular();
    assert!(unitary_equiv(&g, &g, &tol()).unwrap().equivalent);
    let gauged = apply_gauge(
        &g,
        &PhaseVector::new(vec![ONE, c(0., 1.), c(-1., 0.)], &tol()).unwrap(),
    )
    .unwrap();
    let v = unitary_equiv(&g, &gauged, &tol()).unwrap();
    assert!(!v.equivalent);
    assert_eq!(v.witness, Some(Witness::Entry { row: 0, col: 1 }));
    let complex = harmonic(3, &[0, 1]);
    let real = harmonic(3, &[1, 2]);
    assert!(!unitary_equiv(&complex, &real, &tol()).unwrap().equivalent);
    assert!(matches!(
        unitary_equiv(&g, &GramMatrix::identity(2), &tol()),
        Err(Error::SizeMismatch { left: 3, right: 2 })
    ));
}

#[test]
fn equiangular_family_is_one_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = printed_equiangular();
    for _ in 0..20 {
        let (a, b) = (unit_random(&mut rng), unit_random(&mut rng));
        let target = family_ab(a, b);
        let v = projective_equiv(&g, &target, &tol()).unwrap();
        assert_certificate(&g, &target, &v);
        let cs = v.phases.unwrap();
        let cs = cs.as_slice();
        assert!((cs[0] - ONE).norm() < 1e-15);
        assert!((cs[1] / cs[0] - a.conj()).norm() < 1e-12);
        assert!((cs[2] / cs[1] - b.conj()).norm() < 1e-12);
    }
}

#[test]
fn cycle_frames_with_different_z_are_inequivalent() {
    let g1 = gram(&cycle_frame(4, ONE));
    let g2 = gram(&cycle_frame(4, c(0., 1.)));
    let v = projective_equiv(&g1, &g2, &tol()).unwrap();
    assert!(!v.equivalent);
    match v.witness.unwrap() {
        Witness::Cycle {
            indices,
            left,
            right,
        } => {
            assert_eq!(indices, vec![0, 1, 2, 3]);
            assert!((left - ONE).norm() < 1e-14);
            assert!((right - c(0., 1.)).norm() < 1e-14);
        }
        w => panic!("unexpected witness {w:?}"),
    }
    assert!(projective_equiv(&g1, &g1, &tol()).unwrap().equivalent);
}

#[test]
fn moduli_mismatch_witness() {
    let v = projective_equiv(&printed_equiangular(), &GramMatrix::identity(3), &tol()).unwrap();
    assert_eq!(v.witness, Some(Witness::Entry { row: 0, col: 1 }));
}

#[test]
fn planted_unitary_and_phases() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let (n, d) = (rng.gen_range(1..=12), rng.gen_range(1..=6));
        let f = random_frame(&mut rng, n, d);
        let u = random_unitary(&mut rng, d);
        let phases: Vec<Scalar> = (0..n).map(|_| unit_random(&mut rng)).collect();
        let h = f.transformed(d, &u).unwrap().scaled(&phases).unwrap();
        let (g1, g2) = (gram(&f), gram(&h));
        let v = projective_equiv(&g1, &g2, &tol()).unwrap();
        assert_certificate(&g1, &g2, &v);
        assert!(
            unitary_equiv(&gram(&f.transformed(d, &u).unwrap()), &g1, &tol())
                .unwrap()
                .equivalent
        );
    }
}

#[test]
fn canonical_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let fam = family_ab(unit_random(&mut rng), unit_random(&mut rng));
        let canon = canonical_gram(&fam, &tol());
        assert!(canon.gram.approx_eq(&printed_equiangular(), &tol()));
        assert!(apply_gauge(&fam, &canon.phases)
            .unwrap()
            .approx_eq(&canon.gram, &tol()));
    }
    // The canonical forest of the 4-cycle is {0,2}, {0,3}, {1,2}; its chord
    // {1,3} carries the sign, as in the two-basis Gramian itself.
    let original = gram(&mub_frame());
    for _ in 0..10 {
        let fam = family_abc(
            unit_random(&mut rng),
            unit_random(&mut rng),
            unit_random(&mut rng),
        );
        let canon = canonical_gram(&fam, &tol());
        assert_eq!(canon.forest.tree_edges, vec![(0, 2), (0, 3), (1, 2)]);
        assert!(canon.gram.approx_eq(&original, &tol()));
    }
    let once = canonical_gram(&original, &tol()).gram;
    assert_eq!(canonical_gram(&once, &tol()).gram, once);
}

#[test]
fn reconstruct_examples() {
    let t = tol();
    let id = GramMatrix::identity(4);
    let r = reconstruct_from_products(&determining_set(&id, &t), &FreePhases::new(), &t).unwrap();
    assert_eq!(r.gram, id);
    assert!(r.realizable);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let set = determining_set(&printed_equiangular(), &t);
    for _ in 0..10 {
        let (a, b) = (unit_random(&mut rng), unit_random(&mut rng));
        // the path tree 0-1-2 with <v0,v1> ~ a and <v1,v2> ~ b
        let free = FreePhases::new()
            .with_tree(vec![(0, 1), (1, 2)])
            .with_phase(0, 1, a)
            .with_phase(1, 2, b);
        let r = reconstruct_from_products(&set, &free, &t).unwrap();
        assert!(r.gram.approx_eq(&family_ab(a, b), &t));
    }

    let set = determining_set(&gram(&mub_frame()), &t);
    for _ in 0..10 {
        let (a, b, cc) = (
            unit_random(&mut rng),
            unit_random(&mut rng),
            unit_random(&mut rng),
        );
        let free = FreePhases::new()
            .with_tree(vec![(0, 2), (1, 2), (1, 3)])
            .with_phase(0, 2, a)
            .with_phase(1, 2, b)
            .with_phase(1, 3, cc);
        let r = reconstruct_from_products(&set, &free, &t).unwrap();
        assert!(r.gram.approx_eq(&family_abc(a, b, cc), &t));
        assert!(r.realizable);
    }
}

#[test]
fn reconstruct_errors() {
    let t = tol();
    let mut set = determining_set(&gram(&mub_frame()), &t);
    let full = set.clone();
    set.cycle_products.clear();
    assert_eq!(
        reconstruct_from_products(&set, &FreePhases::new(), &t),
        Err(Error::MissingCycleProduct {
            cycle: vec![0, 2, 1, 3]
        })
    );
    let mut bad = full.clone();
    bad.cycle_products[0].value *= 2.0;
    assert!(matches!(
        reconstruct_from_products(&bad, &FreePhases::new(), &t),
        Err(Error::InconsistentModulus { .. })
    ));
    let off_tree = FreePhases::new().with_phase(1, 3, ONE);
    assert!(reconstruct_from_products(&full, &off_tree, &t).is_err());
}

#[test]
fn unrealizable_data_is_flagged() {
    let t = tol();
    // moduli 1/2 against norms 0.4 violate Cauchy-Schwarz
    let mut set = determining_set(&printed_equiangular(), &t);
    set.norms = vec![0.4, 0.4, 0.4];
    let r = reconstruct_from_products(&set, &FreePhases::new(), &t).unwrap();
    assert!(!r.realizable);
}

#[test]
fn reindex_examples() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (n, d) = (rng.gen_range(1..=9), rng.gen_range(1..=4));
        let g = gram(&random_frame(&mut rng, n, d));
        let phases = PhaseVector::new((0..n).map(|_| unit_random(&mut rng)).collect(), &t).unwrap();
        let target = apply_gauge(&g, &phases)
            .unwrap()
            .permuted(&random_perm(&mut rng, n))
            .unwrap();
        let v = projective_equiv_reindex(&g, &target, &t, DEFAULT_BUDGET).unwrap();
        assert_certificate(&g, &target, &v);
    }

    let complex = harmonic(3, &[0, 1]);
    let real = harmonic(3, &[1, 2]);
    assert!(
        !unitary_equiv_reindex(&complex, &real, &t, DEFAULT_BUDGET)
            .unwrap()
            .equivalent
    );
    let v = projective_equiv_reindex(&complex, &real, &t, DEFAULT_BUDGET).unwrap();
    assert_certificate(&complex, &real, &v);

    let w = Scalar::from_polar(1.0, 2.0 * core::f64::consts::PI / 5.0);
    let v = projective_equiv_reindex(
        &gram(&cycle_frame(5, ONE)),
        &gram(&cycle_frame(5, w)),
        &t,
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert!(!v.equivalent);
    assert!(matches!(v.witness, Some(Witness::SearchExhausted { .. })));
}

/// Oracle: try every permutation explicitly.
fn brute_reindex(g1: &GramMatrix, g2: &GramMatrix) -> bool {
    fn perms(
        k: usize,
        p: &mut Vec<usize>,
        used: &mut Vec<bool>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if p.len() == k {
            return f(p);
        }
        for u in 0..k {
            if !used[u] {
                used[u] = true;
                p.push(u);
                let hit = perms(k, p, used, f);
                p.pop();
                used[u] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    let n = g1.n();
    perms(n, &mut Vec::new(), &mut vec![false; n], &mut |p| {
        projective_equiv(&g1.permuted(p).unwrap(), g2, &tol())
            .unwrap()
            .equivalent
    })
}

#[test]
fn reindex_agrees_with_brute_force_on_cycles() {
    let t = tol();
    let zs = [
        ONE,
        c(0., 1.),
        Scalar::from_polar(1.0, 0.4),
        c(0., -1.),
        Scalar::from_polar(1.0, -0.4),
    ];
    for n in 3..=6 {
        for a in &zs {
            for b in &zs {
                let (g1, g2) = (gram(&cycle_frame(n, *a)), gram(&cycle_frame(n, *b)));
                let v = projective_equiv_reindex(&g1, &g2, &t, DEFAULT_BUDGET).unwrap();
                assert_eq!(v.equivalent, brute_reindex(&g1, &g2), "n={n} {a} {b}");
                if v.equivalent {
                    assert_certificate(&g1, &g2, &v);
                }
            }
        }
    }
}

#[test]
fn reindex_budget_reports_unknown() {
    let g = harmonic(8, &[0, 1, 3]);
    let h = g.permuted(&[7, 6, 5, 4, 3, 2, 1, 0]).unwrap();
    assert!(matches!(
        projective_equiv_reindex(&g, &h, &tol(), 3),
        Err(Error::SearchBudgetExceeded { .. })
    ));
}

#[test]
fn reindex_returns_lex_least_permutation() {
    let t = tol();
    // Every permutation of the identity works; the least is the identity.
    let v = unitary_equiv_reindex(
        &GramMatrix::identity(5),
        &GramMatrix::identity(5),
        &t,
        DEFAULT_BUDGET,
    )
    .unwrap();
    assert_eq!(v.permutation, Some(vec![0, 1, 2, 3, 4]));
    let g = harmonic(5, &[0, 1]);
    let h = g.permuted(&[2, 3, 4, 0, 1]).unwrap();
    let v = unitary_equiv_reindex(&g, &h, &t, DEFAULT_BUDGET).unwrap();
    // rotations and the reflection preserve this Gramian; the least image of 0 is 0
    assert_eq!(v.permutation.as_ref().unwrap()[0], 0);
    assert_certificate(&g, &h, &v);
}

#[test]
fn seidel_examples() {
    let t = tol();
    let s = seidel_data(&printed_equiangular(), &t).unwrap();
    assert!((s.alpha - 0.5).abs() < 1e-15);
    assert!((0..3).all(|j| (0..3).all(|k| s.sign(j, k) == if j == k { 0 } else { 1 })));
    assert!(s.neg_triples.is_empty());

    let switched = apply_gauge(
        &printed_equiangular(),
        &PhaseVector::new(vec![ONE, -ONE, ONE], &t).unwrap(),
    )
    .unwrap();
    let s2 = seidel_data(&switched, &t).unwrap();
    assert_eq!(s2.neg_triples, s.neg_triples);
    assert_eq!(s2.sign(0, 1), -1);

    assert_eq!(
        seidel_data(&gram(&mub_frame()), &t),
        Err(Error::NotRealEquiangular)
    );
    assert_eq!(
        seidel_data(&harmonic(3, &[0, 1]), &t),
        Err(Error::NotRealEquiangular)
    );
}

#[test]
fn seidel_two_graph_matches_triple_signs() {
    // six equiangular lines in R^3 from the icosahedron
    let p = (1.0 + sqrt(5.0)) / 2.0;
    let raw: [[f64; 3]; 6] = [
        [0., 1., p],
        [0., 1., -p],
        [1., p, 0.],
        [1., -p, 0.],
        [p, 0., 1.],
        [-p, 0., 1.],
    ];
    let norm = sqrt(1.0 + p * p);
    let rows: Vec<Vec<f64>> = raw
        .iter()
        .map(|v| v.iter().map(|x| x / norm).collect())
        .collect();
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    let g = gram(&Frame::from_real(3, &refs).unwrap());
    let s = seidel_data(&g, &tol()).unwrap();
    assert!((s.alpha - 1.0 / sqrt(5.0)).abs() < 1e-12);
    let t = triple_products(&g);
    let mut neg = Vec::new();
    for j in 0..6 {
        for k in j + 1..6 {
            for l in k + 1..6 {
                if t.get(j, k, l).re < 0.0 {
                    neg.push((j, k, l));
                }
            }
        }
    }
    assert_eq!(s.neg_triples, neg);
    assert_eq!(s.neg_triples.len(), 10);
}

#[test]
fn determining_sets_decide_equivalence() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let (n, d) = (rng.gen_range(2..=8), rng.gen_range(1..=4));
        let g = gram(&random_frame(&mut rng, n, d));
        let phases = PhaseVector::new((0..n).map(|_| unit_random(&mut rng)).collect(), &t).unwrap();
        let h = apply_gauge(&g, &phases).unwrap();
        assert!(
            compare_determining_sets(&determining_set(&g, &t), &determining_set(&h, &t), &t)
                .unwrap()
                .equivalent
        );
    }
    let s1 = determining_set(&gram(&cycle_frame(4, ONE)), &t);
    let s2 = determining_set(&gram(&cycle_frame(4, c(0., 1.))), &t);
    let v = compare_determining_sets(&s1, &s2, &t).unwrap();
    assert!(matches!(v.witness, Some(Witness::Cycle { .. })));
}

fn arb_sparse_frame() -> impl Strategy<Value = Frame> {
    (1usize..9, 1usize..5).prop_flat_map(|(n, d)| {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0u8..3), n * d).prop_map(move |xs| {
            let vectors = xs
                .chunks(d)
                .map(|ch| {
                    ch.iter()
                        .map(|&(a, b, keep)| if keep == 0 { c(0., 0.) } else { c(a, b) })
                        .collect()
                })
                .collect();
            Frame::new(d, vectors).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn reconstruction_round_trip(f in arb_sparse_frame()) {
        let t = tol();
        let g = gram(&f);
        let r = reconstruct_from_products(&determining_set(&g, &t), &FreePhases::new(), &t).unwrap();
        let v = projective_equiv(&g, &r.gram, &t).unwrap();
        prop_assert!(v.equivalent);
        prop_assert!(r.realizable);
    }

    #[test]
    fn canonical_form_decides(f in arb_sparse_frame(), angles in proptest::collection::vec(-3.2f64..3.2, 8), flip in 0usize..64) {
        let t = tol();
        let g1 = gram(&f);
        let n = g1.n();
        let g2 = apply_gauge(&g1, &PhaseVector::from_angles(&angles[..n])).unwrap();
        // optionally break one chord by conjugating the whole matrix
        let g3 = if flip % 2 == 0 { g2.clone() } else {
            GramMatrix::from_rows(g2.rows().into_iter().map(|r| r.into_iter().map(|z| z.conj()).collect()).collect(), &t).unwrap()
        };
        let equiv = projective_equiv(&g1, &g3, &t).unwrap().equivalent;
        let same = canonical_gram(&g1, &t).gram.approx_eq(&canonical_gram(&g3, &t).gram, &t);
        prop_assert_eq!(equiv, same);
        let canon = canonical_gram(&g1, &t);
        for &(p, q) in &canon.forest.tree_edges {
            prop_assert_eq!(canon.gram.get(p, q).im, 0.0);
            prop_assert!(canon.gram.get(p, q).re >= 0.0);
        }
    }

    #[test]
    fn certificates_are_sound(f in arb_sparse_frame(), h in arb_sparse_frame()) {
        let (g1, g2) = (gram(&f), gram(&h));
        if g1.n() == g2.n() {
            let v = projective_equiv(&g1, &g2, &tol()).unwrap();
            if v.equivalent {
                assert_certificate(&g1, &g2, &v);
            }
        }
    }
}
