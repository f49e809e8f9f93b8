use mons_core::baselines::{
    arow_update, cw_update, pa1_update, perceptron_update, scw_update, BaselineConfig,
    GaussianState, ScwVariant,
};
use mons_core::harness::synthetic::{generate, SyntheticSpec};
use mons_core::{Algorithm, ClassLabel, LearnerConfig, SparseVector, WeightMatrix};
use proptest::prelude::*;

type Update =
    fn(&mut GaussianState, &SparseVector, ClassLabel) -> mons_core::Result<mons_core::Step>;

fn scw1(
    s: &mut GaussianState,
    x: &SparseVector,
    y: ClassLabel,
) -> mons_core::Result<mons_core::Step> {
    scw_update(s, x, y, ScwVariant::One)
}

fn scw2(
    s: &mut GaussianState,
    x: &SparseVector,
    y: ClassLabel,
) -> mons_core::Result<mons_core::Step> {
    scw_update(s, x, y, ScwVariant::Two)
}

const GAUSSIAN: [(&str, Update); 4] = [
    ("cw", cw_update),
    ("arow", arow_update),
    ("scw1", scw1),
    ("scw2", scw2),
];

fn stream() -> impl Strategy<Value = (usize, usize, Vec<(Vec<f64>, usize)>)> {
    (2usize..5, 1usize..7).prop_flat_map(|(m, d)| {
        let inst = (prop::collection::vec(-3.0f64..3.0, d), 0..m);
        (Just(m), Just(d), prop::collection::vec(inst, 1..40))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn variances_stay_in_unit_interval((m, d, data) in stream()) {
        for (name, update) in GAUSSIAN {
            let mut st = GaussianState::new(m, d, BaselineConfig::default()).unwrap();
            for (x, y) in &data {
                let x = SparseVector::from_dense(x).unwrap();
                update(&mut st, &x, ClassLabel::from_index(*y)).unwrap();
                let s = st.sigma.as_slice();
                prop_assert!(s.iter().all(|v| *v > 0.0 && *v <= 1.0), "{name}: {s:?}");
                prop_assert!(st.mu.is_finite(), "{name}");
            }
        }
    }

    #[test]
    fn passive_rounds_change_nothing((m, d, data) in stream()) {
        for (name, update) in GAUSSIAN {
            let mut st = GaussianState::new(m, d, BaselineConfig::default()).unwrap();
            for (x, y) in &data {
                let x = SparseVector::from_dense(x).unwrap();
                let (mu, sigma) = (st.mu.clone(), st.sigma.clone());
                let step = update(&mut st, &x, ClassLabel::from_index(*y)).unwrap();
                if !step.updated {
                    prop_assert_eq!(&st.mu, &mu, "{}", name);
                    prop_assert_eq!(&st.sigma, &sigma, "{}", name);
                }
            }
        }
        let mut p = WeightMatrix::zeros(m, d).unwrap();
        let mut pa = WeightMatrix::zeros(m, d).unwrap();
        for (x, y) in &data {
            let x = SparseVector::from_dense(x).unwrap();
            let y = ClassLabel::from_index(*y);
            let before = p.clone();
            if !perceptron_update(&mut p, &x, y).unwrap().updated {
                prop_assert_eq!(&p, &before);
            }
            let before = pa.clone();
            if !pa1_update(&mut pa, &x, y, 1.0).unwrap().updated {
                prop_assert_eq!(&pa, &before);
            }
        }
    }
}

/// Counts updates in the first and the last 1000 rounds of a 10,000-round
/// separable stream (margin 1 under the hidden model).
fn early_late(algo: Algorithm, seed: u64) -> (usize, usize) {
    let (data, _) = generate(&SyntheticSpec::separable(3, 5, 10_000, 1.0, seed)).unwrap();
    let mut learner = algo.build(3, 5, &LearnerConfig::default()).unwrap();
    let (mut early, mut late) = (0, 0);
    for (t, (x, y)) in data.instances().iter().enumerate() {
        let updated = learner.observe(x, *y).unwrap().updated;
        if t < 1_000 {
            early += usize::from(updated);
        } else if t >= 9_000 {
            late += usize::from(updated);
        }
    }
    (early, late)
}

#[test]
fn perceptron_stops_on_separable_stream() {
    for seed in 11..16 {
        let (early, late) = early_late(Algorithm::Perceptron, seed);
        assert!(early > 0);
        assert_eq!(late, 0, "seed {seed}");
    }
}

#[test]
fn hinge_learners_slow_down_on_separable_stream() {
    for algo in [
        Algorithm::Pa1,
        Algorithm::Cw,
        Algorithm::Arow,
        Algorithm::Scw1,
        Algorithm::Scw2,
    ] {
        for seed in 11..16 {
            let (early, late) = early_late(algo, seed);
            assert!(
                late * 4 < early,
                "{algo} seed {seed}: {early} early vs {late} late"
            );
        }
    }
}

#[test]
fn memory_is_linear_in_model_size() {
    let cfg = LearnerConfig::default();
    for (m, d) in [(3, 5), (10, 780)] {
        for algo in Algorithm::ALL {
            let learner = algo.build(m, d, &cfg).unwrap();
            let expected = if Algorithm::COVARIANCE.contains(&algo) {
                2 * m * d
            } else {
                m * d
            };
            assert_eq!(learner.parameter_count(), expected, "{algo}");
        }
    }
}
