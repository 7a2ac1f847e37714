use mfc_core::linalg::Matrix;
use mfc_core::plants::synthetic_ulm_plant_step;
use mfc_core::ulm::{reconstruct_f, UlmConfig, UlmEstimator, UlmObserverOrder};
use proptest::prelude::*;

proptest! {
    #[test]
    fn synthetic_plant_round_trips_through_reconstruction(
        y0 in -5.0f64..5.0,
        y1 in -5.0f64..5.0,
        amp in 0.0f64..3.0,
        freq in 0.0f64..1.0,
        gain in 0.2f64..4.0,
        u in -2.0f64..2.0,
    ) {
        let g = Matrix::scalar(gain);
        let mut ys = vec![y0, y1];
        for k in 0..50 {
            let f = amp * (freq * k as f64).sin();
            let uk = u * (0.3 * k as f64).cos();
            let next = synthetic_ulm_plant_step(&[ys[k]], &[ys[k + 1]], &[f], &g, &[uk]).unwrap()[0];
            ys.push(next);
            let window = vec![vec![ys[k]], vec![ys[k + 1]], vec![ys[k + 2]]];
            let rec = reconstruct_f(&window, &[gain * uk], 2).unwrap()[0];
            let scale = 1.0 + ys[k + 2].abs() + ys[k + 1].abs() + ys[k].abs();
            prop_assert!((rec - f).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn estimator_tracks_ramp_only_with_second_order() {
    let ramp = |k: usize| -1.0 + 0.05 * k as f64;
    let mut first = UlmEstimator::new(UlmConfig::new(2, 1.5, 9.0 / 7.0, UlmObserverOrder::First).unwrap(), 1);
    let mut second = UlmEstimator::new(UlmConfig::new(2, 1.5, 9.0 / 7.0, UlmObserverOrder::Second).unwrap(), 1);
    let n = 20_000;
    for k in 0..n {
        first.push(&[ramp(k)]).unwrap();
        second.push(&[ramp(k)]).unwrap();
    }
    let e1 = (first.prediction()[0] - ramp(n)).abs();
    let e2 = (second.prediction()[0] - ramp(n)).abs();
    assert!(e2 < 1e-6, "{e2}");
    assert!(e1 > 0.01 && e1 < 0.05, "{e1}");
}
