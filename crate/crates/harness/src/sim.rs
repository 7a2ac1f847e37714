//! Closed-loop runner: plant, noisy measurement, output observer, ULM
//! estimator and the second-order tracking law.
//!
//! Timing at step `k`:
//! 1. the plant advances over one period under the input chosen at `k−1`;
//! 2. the observer consumes `y^m_k`;
//! 3. from `k = 2` on, `F_{k−2}` is reconstructed from the last three
//!    estimates and the `G·u` chosen at `k−1`, then fed to the estimator;
//! 4. the law is evaluated one step in arrears on `(e_{k−1}, e_k)` with
//!    desired samples `k−1 ..= k+1`, and `u_k` is solved from `G·u_k = rhs`.
//!
//! Before `k = 2` there is not enough history and the input is zero.

use std::time::Instant;

use mfc_core::controller::{control_terms_second_order, influence_gain, solve_input, InfluencePolicy};
use mfc_core::linalg::norm;
use mfc_core::observer::OutputObserver;
use mfc_core::plants::{
    generate_desired_samples, propagate, sample_count, BumpNoise, PendulumParams, PendulumState,
};
use mfc_core::ulm::{reconstruct_f, UlmEstimator};
use serde::Serialize;

use crate::config::{ExperimentConfig, PlantConfig, Signal};
use crate::error::Result;

/// One logged sample. Every field is computed from data available at or
/// before step `k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Record {
    pub t: f64,
    pub y_d: f64,
    pub y_true: f64,
    pub y_meas: f64,
    pub y_hat: f64,
    /// `y_true − y_d`.
    pub e: f64,
    /// `y_hat − y_true`.
    pub e_o: f64,
    /// Newest `F` reconstructed from the true outputs (`F_{k−2}`).
    pub f_true: f64,
    /// Prediction produced at this step.
    pub f_hat: f64,
    /// Prediction that was used for `F_{k−2}`, minus `F_true`.
    pub e_f: f64,
    pub s: f64,
    pub u: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunLog {
    pub records: Vec<Record>,
    /// Step at which a non-finite value appeared; the log stops just before.
    pub diverged_at: Option<usize>,
    pub meta: RunMeta,
}

enum Truth {
    Pendulum {
        state: PendulumState<f64>,
        params: PendulumParams<f64>,
        substeps: usize,
    },
    Synthetic {
        outputs: Vec<f64>,
        f_signal: Signal,
    },
}

impl Truth {
    /// Output at step `k` after applying `u_prev` (with `G·u_prev = v_prev`).
    fn advance(&mut self, k: usize, u_prev: &[f64], v_prev: f64, dt: f64) -> Option<f64> {
        match self {
            Truth::Pendulum {
                state,
                params,
                substeps,
            } => {
                if k > 0 {
                    *state = propagate(state, u_prev[0], dt, *substeps, params).ok()?;
                }
                Some(state.theta)
            }
            Truth::Synthetic { outputs, f_signal } => {
                if k >= 2 {
                    let y = 2.0 * outputs[k - 1] - outputs[k - 2] + f_signal.at(k - 2) + v_prev;
                    outputs.push(y);
                }
                let y = outputs[k];
                y.is_finite().then_some(y)
            }
        }
    }
}

pub fn run_closed_loop(config: &ExperimentConfig) -> Result<RunLog> {
    let started = Instant::now();
    let v = config.validate()?;
    let dt = v.dt;
    let n = if config.horizon == 0.0 {
        0
    } else {
        sample_count(config.horizon, dt)
    };

    let (mut truth, desired): (Truth, Vec<f64>) = match &config.plant {
        PlantConfig::Pendulum(p) => {
            let params = v.pendulum.expect("validated pendulum");
            let reference = if n == 0 {
                Vec::new()
            } else {
                generate_desired_samples(&params, &p.reference_initial.into(), n + 1, dt, p.substeps)?
                    .into_iter()
                    .map(|s| s.theta)
                    .collect()
            };
            (
                Truth::Pendulum {
                    state: p.initial_truth.into(),
                    params,
                    substeps: p.substeps,
                },
                reference,
            )
        }
        PlantConfig::SyntheticUlm(p) => (
            Truth::Synthetic {
                outputs: p.initial_outputs.to_vec(),
                f_signal: p.f_signal.clone(),
            },
            (0..=n).map(|k| p.desired.at(k)).collect(),
        ),
    };
    let oracle_signal = match (&config.plant, config.oracle_f) {
        (PlantConfig::SyntheticUlm(p), true) => Some(p.f_signal.clone()),
        _ => None,
    };

    let mut noise = v.noise.as_ref().map(BumpNoise::new);
    let mut observer: Option<OutputObserver<f64>> = None;
    let mut ulm = UlmEstimator::new(v.ulm.clone(), 1);
    let policy = v.controller.policy();
    let inputs = match policy {
        InfluencePolicy::FixedMatrix(g) => g.cols(),
        InfluencePolicy::AdaptiveScalar { .. } => 1,
    };

    let mut records = Vec::with_capacity(n);
    let mut y_hist: Vec<f64> = Vec::with_capacity(n);
    let mut yhat_hist: Vec<f64> = Vec::with_capacity(n);
    let mut v_hist: Vec<f64> = Vec::with_capacity(n);
    let mut u_prev = vec![0.0; inputs];
    let mut f_hat = 0.0;
    let mut diverged_at = None;

    for k in 0..n {
        let v_prev = v_hist.last().copied().unwrap_or(0.0);
        let Some(y) = truth.advance(k, &u_prev, v_prev, dt) else {
            diverged_at = Some(k);
            break;
        };
        let y_meas = y + noise.as_mut().map_or(0.0, BumpNoise::sample);
        let y_hat = match observer.as_mut() {
            None => {
                let o = OutputObserver::new(v.observer.clone(), config.initial_estimates.clone(), &[y_meas])?;
                let est = o.estimate()[0];
                observer = Some(o);
                est
            }
            Some(o) => o.step(&[y_meas])?[0],
        };
        y_hist.push(y);
        yhat_hist.push(y_hat);

        let (mut f_true, mut e_f) = (0.0, 0.0);
        let (s, u, g_val) = if k >= 2 {
            let effect = [v_hist[k - 1]];
            let window = |h: &[f64]| vec![vec![h[k - 2]], vec![h[k - 1]], vec![h[k]]];
            f_true = reconstruct_f(&window(&y_hist), &effect, 2)?[0];
            e_f = f_hat - f_true;
            f_hat = match &oracle_signal {
                Some(sig) => sig.at(k - 1) + config.oracle_f_offset,
                None => {
                    let f_rec = reconstruct_f(&window(&yhat_hist), &effect, 2)?;
                    ulm.push(&f_rec)?[0]
                }
            };

            let e_prev = [yhat_hist[k - 1] - desired[k - 1]];
            let e_cur = [y_hat - desired[k]];
            let terms = control_terms_second_order(
                &e_prev,
                &e_cur,
                [&[desired[k - 1]], &[desired[k]], &[desired[k + 1]]],
                &[f_hat],
                &v.controller,
            )?;
            if !terms.rhs.iter().chain(&terms.feedback).all(|x| x.is_finite()) {
                diverged_at = Some(k);
                break;
            }
            let g = influence_gain(policy, &terms.feedback)?;
            let u_k = solve_input(&g, &terms.rhs)?;
            let applied = g.mul_vec(&u_k)?[0];
            let row: Vec<f64> = (0..g.cols()).map(|j| g.get(0, j)).collect();
            let logged_u = if u_k.len() == 1 { u_k[0] } else { norm(&u_k) };
            v_hist.push(applied);
            u_prev = u_k;
            (terms.sliding[0], logged_u, if row.len() == 1 { row[0] } else { norm(&row) })
        } else {
            let g = influence_gain(policy, &[0.0])?;
            v_hist.push(0.0);
            u_prev = vec![0.0; inputs];
            (0.0, 0.0, g.get(0, 0))
        };

        let rec = Record {
            t: k as f64 * dt,
            y_d: desired[k],
            y_true: y,
            y_meas,
            y_hat,
            e: y - desired[k],
            e_o: y_hat - y,
            f_true,
            f_hat,
            e_f,
            s,
            u,
            g: g_val,
        };
        if ![rec.y_hat, rec.f_hat, rec.s, rec.u, rec.g].iter().all(|x| x.is_finite()) {
            diverged_at = Some(k);
            break;
        }
        records.push(rec);
    }

    Ok(RunLog {
        records,
        diverged_at,
        meta: RunMeta {
            config: config.clone(),
            seed: config.seed,
            wall_time_s: started.elapsed().as_secs_f64(),
            warnings: v.warnings,
        },
    })
}
