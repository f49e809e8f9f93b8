use mons_core::mons::{
    margin_probabilities, matrix_a, matrix_b, mons_step, newton_direction, signed_labels,
    MonsConfig, MonsState,
};
use mons_core::multiclass::{hinge_loss, predict, scores, top_rival};
use mons_core::{ClassLabel, SparseVector, WeightMatrix};
use proptest::prelude::*;

/// `sum_c sigmoid(-ytilde_c (W x)_c)`, evaluated from scratch.
fn surrogate(w: &[f64], m: usize, x: &[f64], yt: &[f64]) -> f64 {
    let d = x.len();
    (0..m)
        .map(|c| {
            let s: f64 = (0..d).map(|j| w[c * d + j] * x[j]).sum();
            1.0 / (1.0 + (yt[c] * s).exp())
        })
        .sum()
}

/// `log(1 + exp(-ytilde_c (W x)_c))` for one class.
fn logistic(w: &[f64], m: usize, c: usize, x: &[f64], yt: &[f64]) -> f64 {
    let d = x.len();
    assert!(c < m);
    let s: f64 = (0..d).map(|j| w[c * d + j] * x[j]).sum();
    (-yt[c] * s).exp().ln_1p()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn instance(
    max_classes: usize,
    max_features: usize,
    range: f64,
) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, usize)> {
    (2..=max_classes, 1..=max_features).prop_flat_map(move |(m, d)| {
        (
            prop::collection::vec(prop::collection::vec(-range..range, d), m),
            prop::collection::vec(-range..range, d),
            0..m,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn first_order_matrix_is_surrogate_gradient((rows, xd, y) in instance(4, 6, 2.0)) {
        let (m, lambda, h) = (rows.len(), 1e-3, 1e-5);
        let w = WeightMatrix::from_rows(&rows).unwrap();
        let x = SparseVector::from_dense(&xd).unwrap();
        let yt = signed_labels(ClassLabel::from_index(y), m).unwrap();
        let b = matrix_b(&w, &x, &yt, lambda).unwrap();

        let mut grad = Vec::with_capacity(w.len());
        let mut wp = w.as_slice().to_vec();
        for k in 0..w.len() {
            let orig = wp[k];
            wp[k] = orig + h;
            let up = surrogate(&wp, m, &xd, &yt);
            wp[k] = orig - h;
            let down = surrogate(&wp, m, &xd, &yt);
            wp[k] = orig;
            grad.push((up - down) / (2.0 * h));
        }
        let analytic: Vec<f64> = b.as_slice().iter().zip(w.as_slice()).map(|(b, w)| b - lambda * w).collect();
        let err: Vec<f64> = analytic.iter().zip(&grad).map(|(a, g)| a - g).collect();
        let scale = max_abs(&analytic).max(1e-6);
        prop_assert!(max_abs(&err) / scale <= 1e-5, "relative error {}", max_abs(&err) / scale);
    }

    #[test]
    fn second_order_matrix_is_logistic_curvature((rows, xd, y) in instance(4, 6, 2.0)) {
        let (m, d, lambda, h) = (rows.len(), xd.len(), 1e-3, 1e-4);
        let w = WeightMatrix::from_rows(&rows).unwrap();
        let x = SparseVector::from_dense(&xd).unwrap();
        let yt = signed_labels(ClassLabel::from_index(y), m).unwrap();
        let p = margin_probabilities(&w, &x, &yt).unwrap();
        let a = matrix_a(&x, &p, lambda).unwrap();

        let mut wp = w.as_slice().to_vec();
        let mut err: f64 = 0.0;
        let mut scale: f64 = 1e-6;
        for c in 0..m {
            for j in 0..d {
                let k = c * d + j;
                let orig = wp[k];
                let mid = logistic(&wp, m, c, &xd, &yt);
                wp[k] = orig + h;
                let up = logistic(&wp, m, c, &xd, &yt);
                wp[k] = orig - h;
                let down = logistic(&wp, m, c, &xd, &yt);
                wp[k] = orig;
                let numeric = (up - 2.0 * mid + down) / (h * h);
                let analytic = a.get(c, j) - lambda;
                err = err.max((analytic - numeric).abs());
                scale = scale.max(analytic.abs());
            }
        }
        prop_assert!(err / scale <= 1e-4, "relative error {}", err / scale);
    }

    #[test]
    fn curvature_is_floored_and_direction_bounded((rows, xd, y) in instance(5, 8, 50.0), lambda in 1e-6f64..1.0) {
        let m = rows.len();
        let w = WeightMatrix::from_rows(&rows).unwrap();
        let x = SparseVector::from_dense(&xd).unwrap();
        let yt = signed_labels(ClassLabel::from_index(y), m).unwrap();
        let p = margin_probabilities(&w, &x, &yt).unwrap();
        let a = matrix_a(&x, &p, lambda).unwrap();
        let b = matrix_b(&w, &x, &yt, lambda).unwrap();
        let dir = newton_direction(&b, &a).unwrap();
        prop_assert!(a.min() >= lambda);
        prop_assert!(dir.max_abs() <= b.max_abs() / lambda);
        prop_assert!(dir.is_finite());
    }

    #[test]
    fn update_from_zero_raises_margin_against_rival((_, xd, y) in instance(5, 8, 2.0), m in 2usize..6) {
        prop_assume!(xd.iter().any(|v| *v != 0.0));
        let y = ClassLabel::from_index(y % m);
        check_descent(MonsState::new(m, xd.len()).unwrap(), &xd, y)?;
    }

    #[test]
    fn update_from_small_weights_raises_margin(
        (rows, _, y) in instance(5, 8, 0.01),
        signs in prop::collection::vec(any::<bool>(), 8),
        mags in prop::collection::vec(0.1f64..2.0, 8),
    ) {
        // features bounded away from zero so the curvature term dominates the regularizer
        let xd: Vec<f64> = (0..rows[0].len()).map(|j| if signs[j] { mags[j] } else { -mags[j] }).collect();
        let w = WeightMatrix::from_rows(&rows).unwrap();
        check_descent(MonsState::from_weights(w), &xd, ClassLabel::from_index(y))?;
    }

    #[test]
    fn weights_stay_finite_over_long_streams(
        stream in prop::collection::vec((prop::collection::vec(-100.0f64..100.0, 4), 0usize..3), 1..200),
        lambda in 1e-6f64..1e-1,
    ) {
        let cfg = MonsConfig { lambda, eta_scale: 0.5 };
        let mut st = MonsState::new(3, 4).unwrap();
        for (xd, y) in &stream {
            let x = SparseVector::from_dense(xd).unwrap();
            mons_step(&mut st, &x, ClassLabel::from_index(*y), &cfg).unwrap();
            prop_assert!(st.weights().is_finite());
        }
    }

    #[test]
    fn scores_are_linear_in_x((rows, xd, _) in instance(5, 8, 3.0), alpha in -10.0f64..10.0) {
        let w = WeightMatrix::from_rows(&rows).unwrap();
        let x = SparseVector::from_dense(&xd).unwrap();
        let s = scores(&w, &x).unwrap();
        let sa = scores(&w, &x.scaled(alpha)).unwrap();
        let tol = 1e-12 * alpha.abs() * max_abs(&s).max(1.0);
        for (a, b) in sa.iter().zip(&s) {
            prop_assert!((a - alpha * b).abs() <= tol, "{a} vs {}", alpha * b);
        }
    }

    #[test]
    fn argmax_ignores_shift_and_positive_scale(s in prop::collection::vec(-5i32..5, 2..8), k in -100i32..100, a in 1i32..50) {
        // integer-valued scores keep the shifted and scaled copies exact
        let s: Vec<f64> = s.into_iter().map(f64::from).collect();
        let shifted: Vec<f64> = s.iter().map(|v| v + f64::from(k)).collect();
        let scaled: Vec<f64> = s.iter().map(|v| v * f64::from(a)).collect();
        let p = predict(&s).unwrap();
        prop_assert_eq!(predict(&shifted).unwrap(), p);
        prop_assert_eq!(predict(&scaled).unwrap(), p);
    }

    #[test]
    fn hinge_vanishes_exactly_at_unit_margin(s in prop::collection::vec(-4.0f64..4.0, 2..6), y in 0usize..6) {
        let y = ClassLabel::from_index(y % s.len());
        let r = top_rival(&s, y).unwrap();
        let margin = s[y.index()] - s[r.index()];
        prop_assert_eq!(hinge_loss(&s, y).unwrap() == 0.0, margin >= 1.0);
    }
}

fn check_descent(mut st: MonsState, xd: &[f64], y: ClassLabel) -> Result<(), TestCaseError> {
    let x = SparseVector::from_dense(xd).unwrap();
    let before = scores(st.weights(), &x).unwrap();
    let r = top_rival(&before, y).unwrap();
    let cfg = MonsConfig {
        lambda: 1e-3,
        eta_scale: 0.5,
    };
    let out = mons_step(&mut st, &x, y, &cfg).unwrap();
    prop_assume!(out.updated);
    let after = scores(st.weights(), &x).unwrap();
    let m0 = before[y.index()] - before[r.index()];
    let m1 = after[y.index()] - after[r.index()];
    prop_assert!(m1 > m0, "margin {m0} -> {m1}");
    Ok(())
}
