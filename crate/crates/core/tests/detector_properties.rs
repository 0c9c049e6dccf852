use mublab_core::detector::{
    bootstrap_entropy_error, noisy_povm, predict_entropy_sum, synthetic_counts, CountRecord, DetectorModel,
    EpsilonProfile,
};
use mublab_core::functionals::entropy_sum;
use mublab_core::montecarlo::haar_random_state;
use mublab_core::rng::{stream, Domain};
use mublab_core::{BasisLabel, Execution, MubSet, StateVector, TripletId};

fn set() -> MubSet<5> {
    MubSet::standard().unwrap()
}

#[test]
fn noiseless_model_reproduces_ideal_entropies() {
    let set = set();
    let model = DetectorModel::noisy(&set, &EpsilonProfile::Uniform(0.0), 1).unwrap();
    for i in 0..1000u64 {
        let psi: StateVector<5> = haar_random_state(&mut stream(3, Domain::TestStates, i));
        let t = TripletId::all(5)[(i % 20) as usize];
        let ideal = entropy_sum(&psi, &set.select(&t.labels()).unwrap()).unwrap();
        assert!((predict_entropy_sum(&psi, &t, &model).unwrap() - ideal).abs() < 1e-12);
    }
}

#[test]
fn completeness_and_positivity_over_draws() {
    let set = set();
    for seed in 0..100u64 {
        let model = DetectorModel::noisy(&set, &EpsilonProfile::Measured, seed).unwrap();
        let c = model.check();
        assert!(c.passed(), "{seed}: {c:?}");
    }
}

#[test]
fn cross_talk_of_basis_f() {
    let set = set();
    let f = set.basis(BasisLabel::F).unwrap();
    for i in 0..50 {
        let povm = noisy_povm(f, 0.019, &mut stream(11, Domain::Povm, i)).unwrap();
        // Cross-talk measured on the F eigenstates directly.
        let miss: f64 = (0..5).map(|g| 1.0 - povm.probabilities(&f.eigenstate(g))[g]).sum::<f64>() / 5.0;
        assert!((miss - 0.019).abs() < 0.005);
        assert!((miss - povm.cross_talk()).abs() < 1e-12);
    }
}

#[test]
fn internal_eigenstates_gain_entropy_under_noise() {
    let set = set();
    let two_log5 = 2.0 * 5f64.log2();
    for draw in 0..1000u64 {
        let eps = 0.05 * (draw % 50 + 1) as f64 / 50.0;
        let model = DetectorModel::noisy(&set, &EpsilonProfile::Uniform(eps), draw).unwrap();
        let t = TripletId::all(5)[(draw % 20) as usize];
        let b = set.basis(t.labels()[(draw % 3) as usize]).unwrap();
        let v = predict_entropy_sum(&b.eigenstate((draw % 5) as usize), &t, &model).unwrap();
        assert!(v >= two_log5, "draw {draw} eps {eps}: {v}");
    }
}

#[test]
fn external_eigenstates_lose_entropy_under_measured_profile() {
    let set = set();
    let three_log5 = 3.0 * 5f64.log2();
    let model = DetectorModel::noisy(&set, &EpsilonProfile::Measured, 8).unwrap();
    for t in TripletId::all(5) {
        for b in set.bases().iter().filter(|b| !t.contains(b.label)) {
            for j in 0..5 {
                assert!(predict_entropy_sum(&b.eigenstate(j), &t, &model).unwrap() < three_log5);
            }
        }
    }
}

fn interval_width(scale: u64) -> f64 {
    let probs = [0.3, 0.25, 0.2, 0.15, 0.1];
    let records: Vec<CountRecord> = (0..3)
        .map(|b| synthetic_counts(&probs, 1000 * scale, &mut stream(21, Domain::Counts, b)).unwrap())
        .collect();
    let i = bootstrap_entropy_error(&records, 500, 4, Execution::Parallel).unwrap();
    i.high - i.low
}

#[test]
fn bootstrap_width_scales_with_counts() {
    let ratio = interval_width(1) / interval_width(100);
    assert!((7.0..14.0).contains(&ratio), "ratio {ratio}");
}
