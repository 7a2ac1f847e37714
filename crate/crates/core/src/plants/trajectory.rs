//! Desired output trajectory: the pendulum angle under a weak damping
//! state feedback on the cart.

use super::pendulum::{rk4_step_with, PendulumParams, PendulumState};
use crate::error::{invalid, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesiredSample<T> {
    pub t: T,
    pub theta: T,
}

/// `F = −c_x·ẋ − ½c_θ·θ̇ − 0.1·c_x·x`.
pub fn desired_force<T: Real>(s: &PendulumState<T>, p: &PendulumParams<T>) -> T {
    -p.cart_friction * s.x_dot - T::lit(0.5) * p.pend_friction * s.theta_dot - T::lit(0.1) * p.cart_friction * s.x
}

/// Samples on `[0, horizon]` at spacing `dt`: `⌊horizon/dt⌋ + 1`.
pub fn sample_count<T: Real>(horizon: T, dt: T) -> usize {
    let r = (horizon / dt).to_f64().unwrap_or(0.0);
    (r + 1e-9).floor() as usize + 1
}

/// `n` samples spaced `dt` apart, integrating with `substeps` RK4 steps per
/// sample under the feedback force.
pub fn generate_desired_samples<T: Real>(
    p: &PendulumParams<T>,
    initial: &PendulumState<T>,
    n: usize,
    dt: T,
    substeps: usize,
) -> Result<Vec<DesiredSample<T>>> {
    if !(dt > T::zero()) {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    if substeps == 0 {
        return Err(invalid("substeps", "must be positive"));
    }
    let h = dt / T::from_usize(substeps).expect("substep count fits the scalar type");
    let mut out = Vec::with_capacity(n);
    let mut s = *initial;
    for k in 0..n {
        if k > 0 {
            for _ in 0..substeps {
                s = rk4_step_with(&s, |st| desired_force(st, p), h, p)?;
            }
        }
        out.push(DesiredSample {
            t: T::from_usize(k).expect("sample index fits the scalar type") * dt,
            theta: s.theta,
        });
    }
    Ok(out)
}

pub fn generate_desired_trajectory<T: Real>(
    p: &PendulumParams<T>,
    initial: &PendulumState<T>,
    horizon: T,
    dt: T,
    substeps: usize,
) -> Result<Vec<DesiredSample<T>>> {
    if !(horizon > T::zero()) {
        return Err(invalid("horizon", format!("must be positive, got {horizon}")));
    }
    if !(dt > T::zero()) {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    generate_desired_samples(p, initial, sample_count(horizon, dt), dt, substeps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(sample_count(70.0, 0.02), 3501);
        assert_eq!(sample_count(1.0, 0.3), 4);
    }

    #[test]
    fn starts_at_initial_angle() {
        let p = PendulumParams::<f64>::default();
        let init = PendulumState::new(0.45, -0.14, -0.3, 0.05);
        let traj = generate_desired_trajectory(&p, &init, 1.0, 0.02, 10).unwrap();
        assert_eq!(traj.len(), 51);
        assert_eq!(traj[0].theta, -0.14);
        assert_eq!(traj[0].t, 0.0);
        assert!(generate_desired_trajectory(&p, &init, 0.0, 0.02, 10).is_err());
    }
}
