//! Ultra-local model: reconstruction of the unmodelled term `F` and the
//! first- and second-order observers that predict it.
//!
//! The model is `y^(ν)_k = F_k + G_k·u_k`. Because the ν-th difference at `k`
//! needs `y_{k+ν}`, a reconstructed `F_k` only becomes available ν samples
//! later; the estimator below is fed those late values one at a time.

use crate::error::{check_dim, invalid, Error, Result};
use crate::fts::{window_difference, HolderGainParams};
use crate::linalg::{add, dot, sub, zeros};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UlmObserverOrder {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UlmConfig<T> {
    order_nu: usize,
    gain: HolderGainParams<T>,
    observer_order: UlmObserverOrder,
}

impl<T: Real> UlmConfig<T> {
    pub fn new(order_nu: usize, margin: T, exponent: T, observer_order: UlmObserverOrder) -> Result<Self> {
        if order_nu == 0 {
            return Err(invalid("order_nu", "must be at least 1"));
        }
        Ok(Self {
            order_nu,
            gain: HolderGainParams::identity(margin, exponent)?,
            observer_order,
        })
    }

    pub fn order_nu(&self) -> usize {
        self.order_nu
    }

    pub fn gain(&self) -> &HolderGainParams<T> {
        &self.gain
    }

    pub fn observer_order(&self) -> UlmObserverOrder {
        self.observer_order
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UlmObserverState<T> {
    /// Current prediction of `F`.
    pub f_hat: Vec<T>,
    /// Last reconstructed `F` fed to the observer.
    pub f_prev: Option<Vec<T>>,
    /// Predicted increment of `F` (second order only).
    pub delta_f_hat: Option<Vec<T>>,
    /// Last realized increment of `F` (second order only).
    pub delta_f_prev: Option<Vec<T>>,
}

impl<T: Real> UlmObserverState<T> {
    /// Zero prediction with no history.
    pub fn new(dim: usize, order: UlmObserverOrder) -> Self {
        Self {
            f_hat: zeros(dim),
            f_prev: None,
            delta_f_hat: (order == UlmObserverOrder::Second).then(|| zeros(dim)),
            delta_f_prev: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.f_hat.len()
    }
}

/// `F_k = y^(ν)_k − G_k·u_k` from the window `y_k, …, y_{k+ν}`.
pub fn reconstruct_f<T: Real>(outputs: &[Vec<T>], input_effect: &[T], nu: usize) -> Result<Vec<T>> {
    if outputs.len() != nu + 1 {
        return Err(Error::WindowLength {
            expected: nu + 1,
            found: outputs.len(),
        });
    }
    for y in outputs {
        check_dim(input_effect.len(), y.len())?;
    }
    Ok(sub(&window_difference(outputs), input_effect))
}

/// `D(e)·e + f_known` with `e = f_hat − f_known`.
pub fn first_order_step<T: Real>(f_hat: &[T], f_known: &[T], gain: &HolderGainParams<T>) -> Result<Vec<T>> {
    check_dim(f_hat.len(), f_known.len())?;
    let e = sub(f_hat, f_known);
    Ok(add(&gain.scaled_step(&e)?, f_known))
}

pub fn second_order_step<T: Real>(
    state: &UlmObserverState<T>,
    f_known: &[T],
    gain: &HolderGainParams<T>,
) -> Result<UlmObserverState<T>> {
    let f_prev = state.f_prev.as_ref().ok_or(Error::MissingHistory)?;
    check_dim(state.dim(), f_known.len())?;
    check_dim(state.dim(), f_prev.len())?;
    let delta_hat_prev = match &state.delta_f_hat {
        Some(d) => {
            check_dim(state.dim(), d.len())?;
            d.clone()
        }
        None => zeros(state.dim()),
    };
    let delta = sub(f_known, f_prev);
    let e_delta = sub(&delta_hat_prev, &delta);
    let delta_f_hat = add(&gain.scaled_step(&e_delta)?, &delta);
    let e_f = sub(&state.f_hat, f_known);
    let f_hat = add(&add(&gain.scaled_step(&e_f)?, f_known), &delta_f_hat);
    Ok(UlmObserverState {
        f_hat,
        f_prev: Some(f_known.to_vec()),
        delta_f_hat: Some(delta_f_hat),
        delta_f_prev: Some(delta),
    })
}

/// One observer update on the newest reconstructed value. The second-order
/// observer only records its first input and keeps predicting zero.
fn advance<T: Real>(state: &UlmObserverState<T>, f_known: &[T], config: &UlmConfig<T>) -> Result<UlmObserverState<T>> {
    match config.observer_order {
        UlmObserverOrder::First => Ok(UlmObserverState {
            f_hat: first_order_step(&state.f_hat, f_known, &config.gain)?,
            f_prev: Some(f_known.to_vec()),
            delta_f_hat: None,
            delta_f_prev: None,
        }),
        UlmObserverOrder::Second => {
            if state.f_prev.is_none() {
                check_dim(state.dim(), f_known.len())?;
                let mut next = state.clone();
                next.f_prev = Some(f_known.to_vec());
                Ok(next)
            } else {
                second_order_step(state, f_known, &config.gain)
            }
        }
    }
}

/// Runs the configured observer on the newest entry of `history` and returns
/// the updated state, whose `f_hat` is the prediction used by the controller.
/// An empty history leaves the state (and its zero prediction) untouched.
pub fn ulm_predict<T: Real>(
    state: &UlmObserverState<T>,
    history: &[Vec<T>],
    config: &UlmConfig<T>,
) -> Result<UlmObserverState<T>> {
    match history.last() {
        None => Ok(state.clone()),
        Some(latest) => advance(state, latest, config),
    }
}

/// `eᵀe`.
pub fn ulm_lyapunov<T: Real>(error: &[T]) -> T {
    dot(error, error)
}

/// `λ·(1 + D(e))²`.
pub fn ulm_gamma<T: Real>(error: &[T], gain: &HolderGainParams<T>) -> Result<T> {
    let d = gain.gain(error)?;
    Ok(gain.margin() * (T::one() + d) * (T::one() + d))
}

/// Stateful estimator fed one reconstructed `F` per sample.
#[derive(Debug, Clone)]
pub struct UlmEstimator<T> {
    config: UlmConfig<T>,
    state: UlmObserverState<T>,
}

impl<T: Real> UlmEstimator<T> {
    pub fn new(config: UlmConfig<T>, dim: usize) -> Self {
        let state = UlmObserverState::new(dim, config.observer_order);
        Self { config, state }
    }

    pub fn push(&mut self, f_known: &[T]) -> Result<&[T]> {
        self.state = advance(&self.state, f_known, &self.config)?;
        Ok(&self.state.f_hat)
    }

    pub fn prediction(&self) -> &[T] {
        &self.state.f_hat
    }

    pub fn state(&self) -> &UlmObserverState<T> {
        &self.state
    }

    pub fn config(&self) -> &UlmConfig<T> {
        &self.config
    }
}
