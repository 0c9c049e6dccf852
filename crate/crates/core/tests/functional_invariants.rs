use mublab_core::bounds::{known_bound, reference_class, ClassId};
use mublab_core::functionals::{entropy_sum, variance_sum};
use mublab_core::montecarlo::haar_random_state;
use mublab_core::rng::{stream, Domain};
use mublab_core::{BasisLabel, MubSet, StateVector, TripletId, C64};
use proptest::prelude::*;

fn omega_power(k: i64) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k.rem_euclid(5) as f64 / 5.0)
}

/// Quadratic-phase construction: basis n has columns ω^{n i² + i j}/√5.
fn quadratic_basis(n: i64) -> [[C64; 5]; 5] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| omega_power(n * (i * i) as i64 + (i * j) as i64) / 5f64.sqrt())
    })
}

#[test]
fn d5_catalog_matches_quadratic_phase_oracle() {
    let set = MubSet::<5>::standard().unwrap();
    for (label, n) in [(BasisLabel::B, 0), (BasisLabel::C, 1), (BasisLabel::E, 2), (BasisLabel::D, 3), (BasisLabel::F, 4)] {
        let want = quadratic_basis(n);
        let got = set.basis(label).unwrap().matrix;
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                assert!((got.entry(i, j) - w).norm() < 1e-12, "{label} ({i},{j})");
            }
        }
    }
}

#[test]
fn d4_catalog_pairwise_overlaps() {
    let set = MubSet::<4>::standard().unwrap();
    for x in set.bases() {
        for y in set.bases() {
            for i in 0..4 {
                for j in 0..4 {
                    let ov: C64 = (0..4).map(|k| x.matrix.entry(k, i).conj() * y.matrix.entry(k, j)).sum();
                    let want = if x.label == y.label { f64::from(u8::from(i == j)) } else { 0.25 };
                    assert!((ov.norm_sqr() - want).abs() < 1e-12);
                }
            }
        }
    }
}

fn state5(seed: u64) -> StateVector<5> {
    haar_random_state(&mut stream(seed, Domain::TestStates, 0))
}

fn state4(seed: u64) -> StateVector<4> {
    haar_random_state(&mut stream(seed, Domain::TestStates, 0))
}

#[test]
fn eigenstate_entropy_sums() {
    let set = MubSet::<5>::standard().unwrap();
    let log5 = 5f64.log2();
    for t in TripletId::all(5) {
        let bases = set.select(&t.labels()).unwrap();
        for b in set.bases() {
            for j in 0..5 {
                let v = entropy_sum(&b.eigenstate(j), &bases).unwrap();
                let k = if t.contains(b.label) { 2.0 } else { 3.0 };
                assert!((v - k * log5).abs() < 1e-12, "{t} {} {j}: {v}", b.label);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pair_sums_respect_maassen_uffink(seed in any::<u64>(), a in 0usize..6, b in 0usize..6) {
        prop_assume!(a != b);
        let set = MubSet::<5>::standard().unwrap();
        let labels = [BasisLabel::ALL[a], BasisLabel::ALL[b]];
        let v = entropy_sum(&state5(seed), &set.select(&labels).unwrap()).unwrap();
        prop_assert!(v >= 5f64.log2() - 1e-9);
    }

    #[test]
    fn triplet_sums_respect_class_bounds(seed in any::<u64>(), t in 0usize..20) {
        let set = MubSet::<5>::standard().unwrap();
        let triplet = TripletId::all(5)[t];
        let bases = set.select(&triplet.labels()).unwrap();
        let psi = state5(seed);
        let class = reference_class(5, &triplet).unwrap();
        let slack = if class == ClassId::S1 { 1e-9 } else { 1e-3 };
        prop_assert!(entropy_sum(&psi, &bases).unwrap() >= class.entropy_bound() - slack);
        prop_assert!(variance_sum(&psi, &bases).unwrap() >= class.variance_bound() - 1e-2);
    }

    #[test]
    fn d4_triplets_respect_bounds(seed in any::<u64>(), t in 0usize..10) {
        let set = MubSet::<4>::standard().unwrap();
        let triplet = TripletId::all(4)[t];
        let bases = set.select(&triplet.labels()).unwrap();
        let psi = state4(seed);
        prop_assert!(entropy_sum(&psi, &bases).unwrap() >= 3.0 - 1e-9);
        prop_assert!(variance_sum(&psi, &bases).unwrap() >= 0.75 - 1e-2);
        let bound = known_bound(4, mublab_core::FunctionalKind::ShannonEntropySum, &triplet.labels()).unwrap();
        prop_assert!(bound.exact);
    }

    #[test]
    fn global_phase_invariance(seed in any::<u64>(), theta in -10.0f64..10.0) {
        let set = MubSet::<5>::standard().unwrap();
        let bases = set.bases();
        let psi = state5(seed);
        let rotated = psi.with_global_phase(theta);
        prop_assert!((entropy_sum(&psi, bases).unwrap() - entropy_sum(&rotated, bases).unwrap()).abs() < 1e-12);
        prop_assert!((variance_sum(&psi, bases).unwrap() - variance_sum(&rotated, bases).unwrap()).abs() < 1e-12);
    }
}

/// Mean Shannon entropy of a Haar state measured in one basis, in bits:
/// (H_d − 1)/ln 2 with H_d the d-th harmonic number.
fn haar_mean_entropy(d: usize) -> f64 {
    let h: f64 = (1..=d).map(|k| 1.0 / k as f64).sum();
    (h - 1.0) / std::f64::consts::LN_2
}

#[test]
fn haar_average_matches_harmonic_oracle() {
    let set = MubSet::<5>::standard().unwrap();
    let bases = set.select(&BasisLabel::parse_list("ABC").unwrap()).unwrap();
    let n = 200_000u64;
    let (mut s, mut s2) = (0.0, 0.0);
    for i in 0..n {
        let v = entropy_sum(&haar_random_state::<5, _>(&mut stream(77, Domain::HaarSample, i)), &bases).unwrap();
        s += v;
        s2 += v * v;
    }
    let mean = s / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    let want = 3.0 * haar_mean_entropy(5);
    assert!((want - 5.554376).abs() < 1e-6);
    assert!((mean - want).abs() < 4.0 * se, "{mean} vs {want} (se {se})");
}
