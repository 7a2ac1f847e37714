//! Discrete-time finite-time-stable observers and model-free tracking
//! control.
//!
//! The pieces compose into one loop: an [`observer`] filters noisy output
//! measurements, the [`ulm`] estimators predict the unmodelled part of the
//! ultra-local model `y^(ν) = F + G·u`, and the [`controller`] turns those
//! predictions into an input. [`plants`] holds the simulated systems the loop
//! is exercised on.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

// `!(x > 0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controller;
pub mod error;
pub mod fts;
pub mod linalg;
pub mod observer;
pub mod plants;
pub mod scalar;
pub mod ulm;

pub use controller::{
    check_separation, control_rhs_general, control_rhs_second_order, control_terms_general,
    control_terms_second_order, influence_gain, manifold_is_schur, manifold_polynomial, perturbed_residual,
    schur_check, sliding_contraction, sliding_lyapunov_drop, sliding_variable, solve_input, ControlTerms,
    InfluencePolicy,
};
pub use error::{Error, Result};
pub use fts::{forward_difference, gamma_ratio_bound, holder_gain, lyapunov_recursion, GammaRatioBound, LyapunovTrace, Weight};
pub use observer::{
    asymptotic_observer_step, asymptotic_steps_to_tolerance, fts_observer_step, observer_gamma, observer_gamma_bound,
    observer_lyapunov, steps_to_tolerance,
};
pub use scalar::Real;
pub use ulm::{first_order_step, reconstruct_f, second_order_step, ulm_gamma, ulm_lyapunov, ulm_predict, UlmObserverOrder};

pub type HolderGainParams = fts::HolderGainParams<f64>;
pub type LyapunovRecursionSpec = fts::LyapunovRecursionSpec<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type OutputObserverConfig = observer::OutputObserverConfig<f64>;
pub type OutputObserverState = observer::OutputObserverState<f64>;
pub type OutputObserver = observer::OutputObserver<f64>;
pub type UlmConfig = ulm::UlmConfig<f64>;
pub type UlmObserverState = ulm::UlmObserverState<f64>;
pub type UlmEstimator = ulm::UlmEstimator<f64>;
pub type ControllerConfig = controller::ControllerConfig<f64>;
pub type TrackingState = controller::TrackingState<f64>;
pub type PendulumParams = plants::PendulumParams<f64>;
pub type PendulumState = plants::PendulumState<f64>;
pub type NoiseModel = plants::NoiseModel<f64>;
pub type BumpNoise = plants::BumpNoise<f64>;
pub type DesiredSample = plants::DesiredSample<f64>;
