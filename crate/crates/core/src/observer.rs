//! Finite-time stable output observer and its asymptotic counterpart.

use crate::error::{check_dim, invalid, Result};
use crate::fts::{pow_or_zero, HolderGainParams};
use crate::linalg::{add, norm, sub};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct OutputObserverConfig<T> {
    pub gain: HolderGainParams<T>,
}

impl<T: Real> OutputObserverConfig<T> {
    pub fn new(gain: HolderGainParams<T>) -> Self {
        Self { gain }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputObserverState<T> {
    /// Current output estimate.
    pub estimate: Vec<T>,
    /// Estimate minus the measurement it was last compared with.
    pub last_error: Vec<T>,
}

impl<T: Real> OutputObserverState<T> {
    pub fn initialize(estimate: Vec<T>, measurement: &[T]) -> Result<Self> {
        check_dim(estimate.len(), measurement.len())?;
        let last_error = sub(&estimate, measurement);
        Ok(Self {
            estimate,
            last_error,
        })
    }

    pub fn dim(&self) -> usize {
        self.estimate.len()
    }
}

/// Advances the estimate to `new_measurement + B(e)·e` where `e` is the
/// previous estimation error.
pub fn fts_observer_step<T: Real>(
    state: &OutputObserverState<T>,
    new_measurement: &[T],
    config: &OutputObserverConfig<T>,
) -> Result<OutputObserverState<T>> {
    check_dim(state.dim(), new_measurement.len())?;
    check_dim(state.dim(), state.last_error.len())?;
    let correction = config.gain.scaled_step(&state.last_error)?;
    let estimate = add(new_measurement, &correction);
    let last_error = sub(&estimate, new_measurement);
    Ok(OutputObserverState {
        estimate,
        last_error,
    })
}

/// `((1 − β)/(1 + β))·error`.
pub fn asymptotic_observer_step<T: Real>(error: &[T], beta: T) -> Result<Vec<T>> {
    if !(beta > T::zero()) {
        return Err(invalid("beta", format!("must be positive, got {beta}")));
    }
    let r = (T::one() - beta) / (T::one() + beta);
    Ok(error.iter().map(|&e| r * e).collect())
}

/// Iterates the noiseless error map `e ← B(e)·e` and returns the first step
/// at which `‖e‖ ≤ tol`, or `None` past `cap` steps.
pub fn steps_to_tolerance<T: Real>(
    initial_error: &[T],
    config: &OutputObserverConfig<T>,
    tol: T,
    cap: usize,
) -> Result<Option<usize>> {
    if !(tol > T::zero()) {
        return Err(invalid("tol", "must be positive"));
    }
    let mut e = initial_error.to_vec();
    for k in 0..=cap {
        if norm(&e) <= tol {
            return Ok(Some(k));
        }
        e = config.gain.scaled_step(&e)?;
    }
    Ok(None)
}

/// Same as [`steps_to_tolerance`] for the asymptotic map.
pub fn asymptotic_steps_to_tolerance<T: Real>(
    initial_error: &[T],
    beta: T,
    tol: T,
    cap: usize,
) -> Result<Option<usize>> {
    if !(tol > T::zero()) {
        return Err(invalid("tol", "must be positive"));
    }
    let mut e = initial_error.to_vec();
    for k in 0..=cap {
        if norm(&e) <= tol {
            return Ok(Some(k));
        }
        e = asymptotic_observer_step(&e, beta)?;
    }
    Ok(None)
}

/// `½·eᵀ·L·e`.
pub fn observer_lyapunov<T: Real>(error: &[T], config: &OutputObserverConfig<T>) -> Result<T> {
    Ok(config.gain.weight().quadratic_form(error)? / T::lit(2.0))
}

/// Rate `γ` in `V_{k+1} − V_k = −γ·V_k^(1/p)` as a function of `V_k`.
pub fn observer_gamma<T: Real>(lyapunov: T, config: &OutputObserverConfig<T>) -> T {
    let two = T::lit(2.0);
    let beta = config.gain.margin();
    let a = config.gain.power();
    let h = pow_or_zero(two * lyapunov, a);
    let num = T::lit(4.0) * beta * two.powf(a) * pow_or_zero(lyapunov, two * a);
    num / ((h + beta) * (h + beta))
}

/// Supremum of [`observer_gamma`] over `V > 0`: `4β/2^(1−1/p)`.
pub fn observer_gamma_bound<T: Real>(config: &OutputObserverConfig<T>) -> T {
    T::lit(4.0) * config.gain.margin() / T::lit(2.0).powf(config.gain.power())
}

/// Stateful convenience wrapper.
#[derive(Debug, Clone)]
pub struct OutputObserver<T> {
    config: OutputObserverConfig<T>,
    state: OutputObserverState<T>,
}

impl<T: Real> OutputObserver<T> {
    pub fn new(config: OutputObserverConfig<T>, estimate0: Vec<T>, measurement0: &[T]) -> Result<Self> {
        if let Some(d) = config.gain.weight().dim() {
            check_dim(d, estimate0.len())?;
        }
        let state = OutputObserverState::initialize(estimate0, measurement0)?;
        Ok(Self { config, state })
    }

    pub fn step(&mut self, measurement: &[T]) -> Result<&[T]> {
        self.state = fts_observer_step(&self.state, measurement, &self.config)?;
        Ok(&self.state.estimate)
    }

    pub fn estimate(&self) -> &[T] {
        &self.state.estimate
    }

    pub fn state(&self) -> &OutputObserverState<T> {
        &self.state
    }

    pub fn config(&self) -> &OutputObserverConfig<T> {
        &self.config
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::fts::Weight;
    use crate::linalg::Matrix;
    use proptest::prelude::*;

    fn pendulum_gains() -> OutputObserverConfig<f64> {
        OutputObserverConfig::new(HolderGainParams::new(Weight::Uniform(2.1), 2.0, 1.4).unwrap())
    }

    #[test]
    fn zero_error_passes_measurement_through() {
        let s = OutputObserverState::initialize(vec![0.3], &[0.3]).unwrap();
        let n = fts_observer_step(&s, &[1.7], &pendulum_gains()).unwrap();
        assert_eq!(n.estimate, vec![1.7]);
        assert_eq!(n.last_error, vec![0.0]);
    }

    #[test]
    fn first_step_from_initial_offset() {
        // Estimate 0.102 against a true start of −0.14, held constant.
        let s = OutputObserverState::initialize(vec![0.102], &[-0.14]).unwrap();
        let n = fts_observer_step(&s, &[-0.14], &pendulum_gains()).unwrap();
        let e1 = n.last_error[0];
        assert!((e1 - (-0.137_684_277_860_026_856_165_346_788_848_445)).abs() < 1e-14);
        assert!(e1.abs() < 0.242);
    }

    #[test]
    fn constant_signal_alternates_and_shrinks() {
        let cfg = pendulum_gains();
        let mut s = OutputObserverState::initialize(vec![1.0], &[0.0]).unwrap();
        let mut prev = 1.0f64;
        for _ in 0..200 {
            s = fts_observer_step(&s, &[0.0], &cfg).unwrap();
            let e = s.last_error[0];
            assert!(e.abs() < prev.abs());
            let b = cfg.gain.gain(&[prev]).unwrap();
            if b < 0.0 {
                assert!(e * prev < 0.0);
            }
            prev = e;
        }
    }

    #[test]
    fn asymptotic_examples() {
        assert!((asymptotic_observer_step(&[1.0f64], 2.0).unwrap()[0] + 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(asymptotic_observer_step(&[0.0], 5.0).unwrap(), vec![0.0]);
        assert_eq!(asymptotic_observer_step(&[3.0], 1.0).unwrap(), vec![0.0]);
        assert!(asymptotic_observer_step(&[1.0], 0.0).is_err());
    }

    #[test]
    fn steps_to_tolerance_examples() {
        let cfg = pendulum_gains();
        assert_eq!(steps_to_tolerance(&[0.0], &cfg, 1e-6, 10).unwrap(), Some(0));
        let k = steps_to_tolerance(&[1.0], &cfg, 1e-6, 100_000).unwrap();
        // Independent iteration of the scalar map written out by hand.
        let a = 1.0 - 1.0 / 1.4;
        let mut e = 1.0f64;
        let mut n = 0;
        while e.abs() > 1e-6 {
            let h = (2.1 * e * e).powf(a);
            e *= (h - 2.0) / (h + 2.0);
            n += 1;
        }
        assert_eq!(k, Some(n));
        assert!(steps_to_tolerance(&[1.0], &cfg, 0.0, 10).is_err());
        assert_eq!(steps_to_tolerance(&[1.0], &cfg, 1e-6, 5).unwrap(), None);
    }

    #[test]
    fn gamma_matches_complement_form() {
        let cfg = pendulum_gains();
        for &e in &[1e-4, 0.242, 1.0, 10.0] {
            let v = observer_lyapunov(&[e], &cfg).unwrap();
            let b = cfg.gain.gain(&[e]).unwrap();
            let alt = 2.0 / 2f64.powf(2.0 / 7.0) * (1.0 + b).powi(2);
            assert!((observer_gamma(v, &cfg) - alt).abs() <= 1e-13 * alt);
        }
    }

    #[test]
    fn stateful_wrapper_checks_weight_dimension() {
        let w = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let cfg = OutputObserverConfig::new(HolderGainParams::new(Weight::Matrix(w), 1.0, 1.5).unwrap());
        assert!(OutputObserver::new(cfg.clone(), vec![0.0], &[0.0]).is_err());
        let mut obs = OutputObserver::new(cfg, vec![1.0, -1.0], &[0.0, 0.0]).unwrap();
        obs.step(&[0.0, 0.0]).unwrap();
        assert!(norm(obs.estimate()) < 2f64.sqrt());
    }

    proptest! {
        #[test]
        fn lyapunov_drop_matches_closed_form(e0 in -10f64..10.0) {
            prop_assume!(e0.abs() > 1e-6);
            let cfg = pendulum_gains();
            let mut e = vec![e0];
            for _ in 0..50 {
                let v = observer_lyapunov(&e, &cfg).unwrap();
                let next = cfg.gain.scaled_step(&e).unwrap();
                let v1 = observer_lyapunov(&next, &cfg).unwrap();
                prop_assert!(v1 < v);
                let predicted = -observer_gamma(v, &cfg) * v.powf(1.0 / 1.4);
                prop_assert!(((v1 - v) - predicted).abs() <= 1e-12 * predicted.abs());
                prop_assert!(observer_gamma(v, &cfg) < observer_gamma_bound(&cfg));
                e = next;
            }
        }

        #[test]
        fn noisy_error_stays_bounded(seed in any::<u64>(), amp in 1e-4f64..1e-2) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let cfg = pendulum_gains();
            let mut s = OutputObserverState::initialize(vec![0.5], &[0.0]).unwrap();
            let mut worst = 0.0f64;
            let mut residual = f64::INFINITY;
            for k in 0..400 {
                let truth = (k as f64 * 0.05).sin();
                let m = truth + rng.gen_range(-amp..amp);
                s = fts_observer_step(&s, &[m], &cfg).unwrap();
                if k == 200 {
                    residual = s.last_error[0].abs();
                }
                if k > 200 {
                    worst = worst.max((s.estimate[0] - truth).abs());
                }
            }
            prop_assert!(worst <= amp + residual);
        }
    }
}
