//! Sliding variable, tracking laws and the influence-matrix policy.
//!
//! Error histories are ordered oldest first; differences are taken at the
//! oldest sample, so a history `[e_k, …, e_{k+ν−1}]` yields `e_k^(i)` for
//! `i < ν`.

use crate::error::{check_dim, invalid, Error, Result};
use crate::fts::{forward_difference, pow_or_zero, HolderGainParams};
use crate::linalg::{add, dot, min_norm_solve, norm, scale, sub, zeros, Matrix};
use crate::observer::OutputObserverConfig;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum InfluencePolicy<T> {
    /// Constant full-row-rank `l×m` matrix.
    FixedMatrix(Matrix<T>),
    /// Scalar `base·(1 + tanh‖E‖)`; single-output plants only.
    AdaptiveScalar { base: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerConfig<T> {
    gain: HolderGainParams<T>,
    coefficients: Vec<T>,
    policy: InfluencePolicy<T>,
}

impl<T: Real> ControllerConfig<T> {
    /// `coefficients` are `c_1, …, c_{ν−1}`; they must satisfy
    /// `1 > c_1 > … > c_{ν−1} > 0`.
    pub fn new(margin: T, exponent: T, coefficients: Vec<T>, policy: InfluencePolicy<T>) -> Result<Self> {
        let gain = HolderGainParams::identity(margin, exponent)?;
        let mut upper = T::one();
        for &c in &coefficients {
            if !(c < upper && c > T::zero()) {
                return Err(invalid(
                    "coefficients",
                    "must be strictly decreasing inside (0, 1)",
                ));
            }
            upper = c;
        }
        match &policy {
            InfluencePolicy::FixedMatrix(g) => {
                if g.rows() > g.cols() || g.gram().cholesky(T::epsilon() * T::lit(64.0)).is_none() {
                    return Err(Error::RankDeficient);
                }
            }
            InfluencePolicy::AdaptiveScalar { base } => {
                if !(*base > T::zero()) || !base.is_finite() {
                    return Err(invalid("base", format!("must be positive, got {base}")));
                }
            }
        }
        Ok(Self {
            gain,
            coefficients,
            policy,
        })
    }

    pub fn gain(&self) -> &HolderGainParams<T> {
        &self.gain
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn policy(&self) -> &InfluencePolicy<T> {
        &self.policy
    }

    pub fn order_nu(&self) -> usize {
        self.coefficients.len() + 1
    }

    /// `2η/((sᵀs)^(1−1/q) + η)`, the feedback weight on `s`.
    pub fn sliding_weight(&self, s: &[T]) -> Result<T> {
        self.gain.complement(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackingState<T> {
    error_history: Vec<Vec<T>>,
    s: Vec<T>,
}

impl<T: Real> TrackingState<T> {
    pub fn new(error_history: Vec<Vec<T>>, coefficients: &[T]) -> Result<Self> {
        let s = sliding_variable(&error_history, coefficients)?;
        Ok(Self { error_history, s })
    }

    pub fn error_history(&self) -> &[Vec<T>] {
        &self.error_history
    }

    pub fn s(&self) -> &[T] {
        &self.s
    }
}

/// `e_k^(i)` for `i = 0..ν` from a history of `ν` samples.
fn differences<T: Real>(history: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    (0..history.len())
        .map(|i| forward_difference(history, i).map(|d| d[0].clone()))
        .collect()
}

/// `s = e^(ν−1) + c_1·e^(ν−2) + … + c_{ν−1}·e`.
pub fn sliding_variable<T: Real>(error_history: &[Vec<T>], coefficients: &[T]) -> Result<Vec<T>> {
    let nu = coefficients.len() + 1;
    if error_history.len() != nu {
        return Err(Error::WindowLength {
            expected: nu,
            found: error_history.len(),
        });
    }
    let d = differences(error_history)?;
    let mut s = d[nu - 1].clone();
    for (i, &c) in coefficients.iter().enumerate() {
        s = add(&s, &scale(c, &d[nu - 2 - i]));
    }
    Ok(s)
}

/// Schur–Cohn test on a monic polynomial given by its non-leading
/// coefficients in descending powers.
fn monic_is_schur<T: Real>(tail: &[T]) -> bool {
    let mut a: Vec<T> = std::iter::once(T::one()).chain(tail.iter().copied()).collect();
    while a.len() > 1 {
        let n = a.len() - 1;
        let k = a[n] / a[0];
        if !(k.abs() < T::one()) {
            return false;
        }
        a = (0..n).map(|i| a[i] - k * a[n - i]).collect();
    }
    true
}

/// Whether `z^n + c_1 z^(n−1) + … + c_n` has every root strictly inside the
/// unit circle.
pub fn schur_check<T: Real>(coefficients: &[T]) -> bool {
    coefficients.iter().all(|c| c.is_finite()) && monic_is_schur(coefficients)
}

/// Coefficients (descending, leading 1 omitted) of the shift-operator
/// polynomial `(z−1)^n + c_1 (z−1)^(n−1) + … + c_n` that governs the error on
/// the manifold `s = 0`.
pub fn manifold_polynomial<T: Real>(coefficients: &[T]) -> Vec<T> {
    let n = coefficients.len();
    let mut poly = vec![T::zero(); n + 1];
    let all: Vec<T> = std::iter::once(T::one()).chain(coefficients.iter().copied()).collect();
    for (i, &c) in all.iter().enumerate() {
        // c·(z−1)^(n−i), placed in descending order with offset i.
        let m = n - i;
        let mut binom = 1.0f64;
        for j in 0..=m {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            poly[i + j] = poly[i + j] + c * T::lit(sign * binom);
            binom = binom * (m - j) as f64 / (j + 1) as f64;
        }
    }
    poly[1..].to_vec()
}

/// Whether tracking errors decay on the manifold `s = 0`.
pub fn manifold_is_schur<T: Real>(coefficients: &[T]) -> bool {
    coefficients.iter().all(|c| c.is_finite()) && monic_is_schur(&manifold_polynomial(coefficients))
}

/// Pieces of a tracking law evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlTerms<T> {
    /// Required `G·u`.
    pub rhs: Vec<T>,
    pub sliding: Vec<T>,
    /// `rhs` minus the desired-trajectory feedforward.
    pub feedback: Vec<T>,
}

/// General order-ν law.
pub fn control_terms_general<T: Real>(
    tracking: &TrackingState<T>,
    desired_diff: &[T],
    f_hat: &[T],
    config: &ControllerConfig<T>,
) -> Result<ControlTerms<T>> {
    let nu = config.order_nu();
    if tracking.error_history.len() != nu {
        return Err(Error::WindowLength {
            expected: nu,
            found: tracking.error_history.len(),
        });
    }
    let l = tracking.s.len();
    check_dim(l, desired_diff.len())?;
    check_dim(l, f_hat.len())?;
    let d = differences(&tracking.error_history)?;
    let w = config.sliding_weight(&tracking.s)?;
    let mut feedback = sub(&scale(-w, &tracking.s), f_hat);
    for (i, &c) in config.coefficients.iter().enumerate() {
        feedback = sub(&feedback, &scale(c, &d[nu - 1 - i]));
    }
    Ok(ControlTerms {
        rhs: add(desired_diff, &feedback),
        sliding: tracking.s.clone(),
        feedback,
    })
}

pub fn control_rhs_general<T: Real>(
    tracking: &TrackingState<T>,
    desired_diff: &[T],
    f_hat: &[T],
    config: &ControllerConfig<T>,
) -> Result<Vec<T>> {
    control_terms_general(tracking, desired_diff, f_hat, config).map(|t| t.rhs)
}

/// Second-order law written out term by term. `desired` holds
/// `y^d_k, y^d_{k+1}, y^d_{k+2}`.
pub fn control_terms_second_order<T: Real>(
    e_k: &[T],
    e_kp1: &[T],
    desired: [&[T]; 3],
    f_hat: &[T],
    config: &ControllerConfig<T>,
) -> Result<ControlTerms<T>> {
    if config.order_nu() != 2 {
        return Err(invalid("coefficients", "second-order law needs exactly one coefficient"));
    }
    let l = e_k.len();
    for v in [e_kp1, desired[0], desired[1], desired[2], f_hat] {
        check_dim(l, v.len())?;
    }
    let mu = config.coefficients[0];
    let two = T::lit(2.0);
    let de = sub(e_kp1, e_k);
    let s = add(&de, &scale(mu, e_k));
    let w = config.sliding_weight(&s)?;
    let c = config.gain.gain(&s)?;
    let feedforward: Vec<T> = (0..l)
        .map(|i| desired[2][i] - two * desired[1][i] + desired[0][i])
        .collect();
    let feedback: Vec<T> = (0..l)
        .map(|i| -w * de[i] + c * mu * e_k[i] - mu * e_kp1[i] - f_hat[i])
        .collect();
    Ok(ControlTerms {
        rhs: add(&feedforward, &feedback),
        sliding: s,
        feedback,
    })
}

pub fn control_rhs_second_order<T: Real>(
    e_k: &[T],
    e_kp1: &[T],
    desired: [&[T]; 3],
    f_hat: &[T],
    config: &ControllerConfig<T>,
) -> Result<Vec<T>> {
    control_terms_second_order(e_k, e_kp1, desired, f_hat, config).map(|t| t.rhs)
}

/// Influence matrix for the current feedback term `E`.
pub fn influence_gain<T: Real>(policy: &InfluencePolicy<T>, feedback: &[T]) -> Result<Matrix<T>> {
    match policy {
        InfluencePolicy::FixedMatrix(g) => {
            check_dim(g.rows(), feedback.len())?;
            Ok(g.clone())
        }
        InfluencePolicy::AdaptiveScalar { base } => {
            if feedback.len() != 1 {
                return Err(Error::AdaptivePolicyDimension {
                    outputs: feedback.len(),
                });
            }
            Ok(Matrix::scalar(*base * (T::one() + norm(feedback).tanh())))
        }
    }
}

/// Input `u` with `G·u = rhs`; minimum norm when `G` is wide.
pub fn solve_input<T: Real>(g: &Matrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    min_norm_solve(g, rhs)
}

/// Requires the controller to be slower than the output observer:
/// `η < β` and `q < p`.
pub fn check_separation<T: Real>(observer: &OutputObserverConfig<T>, controller: &ControllerConfig<T>) -> Result<()> {
    let (beta, p) = (observer.gain.margin(), observer.gain.exponent());
    let (eta, q) = (controller.gain.margin(), controller.gain.exponent());
    let mut problems = Vec::new();
    if !(eta < beta) {
        problems.push(format!("controller margin {eta} is not below observer margin {beta}"));
    }
    if !(q < p) {
        problems.push(format!("controller exponent {q} is not below observer exponent {p}"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::SeparationViolated(problems.join("; ")))
    }
}

/// Ideal sliding update `C(s)·s`.
pub fn sliding_contraction<T: Real>(s: &[T], config: &ControllerConfig<T>) -> Result<Vec<T>> {
    config.gain.scaled_step(s)
}

/// `½‖C(s)s‖² − ½‖s‖²` in closed form: `−(η/2)(1 + C)²·(sᵀs)^(1/q)`.
pub fn sliding_lyapunov_drop<T: Real>(s: &[T], config: &ControllerConfig<T>) -> Result<T> {
    let c = config.gain.gain(s)?;
    let x = dot(s, s);
    let eta = config.gain.margin();
    Ok(-eta / T::lit(2.0) * (T::one() + c) * (T::one() + c) * pow_or_zero(x, config.gain.exponent().recip()))
}

/// Residual of `s_{k+1} − s_k + w(s_k)·s_k + e^F_k = 0`, where `w` is the
/// sliding weight and `e^F = F̂ − F`.
pub fn perturbed_residual<T: Real>(
    s_k: &[T],
    s_kp1: &[T],
    f_error: &[T],
    config: &ControllerConfig<T>,
) -> Result<Vec<T>> {
    check_dim(s_k.len(), s_kp1.len())?;
    check_dim(s_k.len(), f_error.len())?;
    let w = config.sliding_weight(s_k)?;
    let mut r = sub(s_kp1, s_k);
    r = add(&r, &scale(w, s_k));
    Ok(add(&r, f_error))
}

/// Zero tracking state for `l` outputs.
pub fn zero_tracking<T: Real>(config: &ControllerConfig<T>, l: usize) -> TrackingState<T> {
    TrackingState {
        error_history: vec![zeros(l); config.order_nu()],
        s: zeros(l),
    }
}
