//! Inverted pendulum on a cart with saturating (tanh) friction.
//!
//! Generalized coordinates are the cart position `x` and the pendulum angle
//! `θ`, measured from upright. The cart force is the only input.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams<T> {
    pub cart_mass: T,
    pub pend_mass: T,
    /// Distance from the pivot to the pendulum's centre of mass.
    pub half_length: T,
    /// Pendulum inertia about its centre of mass.
    pub inertia: T,
    pub gravity: T,
    /// Saturation level of the cart friction force.
    pub cart_friction: T,
    /// Saturation level of the pivot friction torque.
    pub pend_friction: T,
}

impl<T: Real> Default for PendulumParams<T> {
    fn default() -> Self {
        Self {
            cart_mass: T::lit(1.5),
            pend_mass: T::lit(0.5),
            half_length: T::lit(1.4),
            inertia: T::lit(0.84),
            gravity: T::lit(9.8),
            cart_friction: T::lit(0.028),
            pend_friction: T::lit(0.0032),
        }
    }
}

impl<T: Real> PendulumParams<T> {
    /// Checks positivity of every field. Friction may be switched off with
    /// exact zeros.
    pub fn validate(&self) -> Result<()> {
        let strictly = [
            ("cart_mass", self.cart_mass),
            ("pend_mass", self.pend_mass),
            ("half_length", self.half_length),
            ("inertia", self.inertia),
            ("gravity", self.gravity),
        ];
        for (name, v) in strictly {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        for (name, v) in [("cart_friction", self.cart_friction), ("pend_friction", self.pend_friction)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// Copy with both friction levels set to zero.
    pub fn frictionless(&self) -> Self {
        Self {
            cart_friction: T::zero(),
            pend_friction: T::zero(),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PendulumState<T> {
    pub x: T,
    pub theta: T,
    pub x_dot: T,
    pub theta_dot: T,
}

impl<T: Real> PendulumState<T> {
    pub fn new(x: T, theta: T, x_dot: T, theta_dot: T) -> Self {
        Self {
            x,
            theta,
            x_dot,
            theta_dot,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.theta.is_finite() && self.x_dot.is_finite() && self.theta_dot.is_finite()
    }

    fn axpy(&self, h: T, d: &Self) -> Self {
        Self {
            x: self.x + h * d.x,
            theta: self.theta + h * d.theta,
            x_dot: self.x_dot + h * d.x_dot,
            theta_dot: self.theta_dot + h * d.theta_dot,
        }
    }
}

pub fn mass_matrix<T: Real>(theta: T, p: &PendulumParams<T>) -> [[T; 2]; 2] {
    let ml = p.pend_mass * p.half_length;
    let off = -ml * theta.cos();
    [
        [p.cart_mass + p.pend_mass, off],
        [off, p.inertia + ml * p.half_length],
    ]
}

/// `(c_x·tanh ẋ, c_θ·tanh θ̇)`.
pub fn friction_forces<T: Real>(x_dot: T, theta_dot: T, p: &PendulumParams<T>) -> (T, T) {
    (p.cart_friction * x_dot.tanh(), p.pend_friction * theta_dot.tanh())
}

/// `(ẍ, θ̈)` under cart force `force`.
pub fn pendulum_accel<T: Real>(s: &PendulumState<T>, force: T, p: &PendulumParams<T>) -> Result<(T, T)> {
    let m = mass_matrix(s.theta, p);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det > T::zero()) {
        return Err(Error::SingularMassMatrix {
            determinant: det.to_f64().unwrap_or(f64::NAN),
        });
    }
    let ml = p.pend_mass * p.half_length;
    let (fx, ft) = friction_forces(s.x_dot, s.theta_dot, p);
    let (sin, _) = s.theta.sin_cos();
    let d0 = ml * s.theta_dot * s.theta_dot * sin + fx;
    let d1 = ft - ml * p.gravity * sin;
    let r0 = force - d0;
    let r1 = -d1;
    let x_dd = (m[1][1] * r0 - m[0][1] * r1) / det;
    let th_dd = (m[0][0] * r1 - m[1][0] * r0) / det;
    Ok((x_dd, th_dd))
}

fn derivative<T: Real>(s: &PendulumState<T>, force: T, p: &PendulumParams<T>) -> Result<PendulumState<T>> {
    let (x_dd, th_dd) = pendulum_accel(s, force, p)?;
    Ok(PendulumState::new(s.x_dot, s.theta_dot, x_dd, th_dd))
}

/// One classical Runge–Kutta step where the force may depend on the state
/// (pass a constant closure for a zero-order hold).
pub(crate) fn rk4_step_with<T: Real>(
    s: &PendulumState<T>,
    force: impl Fn(&PendulumState<T>) -> T,
    dt: T,
    p: &PendulumParams<T>,
) -> Result<PendulumState<T>> {
    let half = dt / T::lit(2.0);
    let k1 = derivative(s, force(s), p)?;
    let s2 = s.axpy(half, &k1);
    let k2 = derivative(&s2, force(&s2), p)?;
    let s3 = s.axpy(half, &k2);
    let k3 = derivative(&s3, force(&s3), p)?;
    let s4 = s.axpy(dt, &k3);
    let k4 = derivative(&s4, force(&s4), p)?;
    let two = T::lit(2.0);
    let sixth = dt / T::lit(6.0);
    let comb = |a: T, b: T, c: T, d: T| sixth * (a + two * b + two * c + d);
    let next = PendulumState {
        x: s.x + comb(k1.x, k2.x, k3.x, k4.x),
        theta: s.theta + comb(k1.theta, k2.theta, k3.theta, k4.theta),
        x_dot: s.x_dot + comb(k1.x_dot, k2.x_dot, k3.x_dot, k4.x_dot),
        theta_dot: s.theta_dot + comb(k1.theta_dot, k2.theta_dot, k3.theta_dot, k4.theta_dot),
    };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::Diverged)
    }
}

/// RK4 step with the force held constant.
pub fn rk4_step<T: Real>(s: &PendulumState<T>, force: T, dt: T, p: &PendulumParams<T>) -> Result<PendulumState<T>> {
    if !(dt > T::zero()) {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    rk4_step_with(s, |_| force, dt, p)
}

/// Advances by `dt` in `substeps` equal RK4 steps under a held force.
pub fn propagate<T: Real>(
    s: &PendulumState<T>,
    force: T,
    dt: T,
    substeps: usize,
    p: &PendulumParams<T>,
) -> Result<PendulumState<T>> {
    if substeps == 0 {
        return Err(invalid("substeps", "must be positive"));
    }
    let h = dt / T::from_usize(substeps).expect("substep count fits the scalar type");
    let mut cur = *s;
    for _ in 0..substeps {
        cur = rk4_step(&cur, force, h, p)?;
    }
    Ok(cur)
}

/// Kinetic plus gravitational potential energy.
pub fn energy<T: Real>(s: &PendulumState<T>, p: &PendulumParams<T>) -> T {
    let m = mass_matrix(s.theta, p);
    let half = T::lit(0.5);
    let kinetic = half * m[0][0] * s.x_dot * s.x_dot
        + m[0][1] * s.x_dot * s.theta_dot
        + half * m[1][1] * s.theta_dot * s.theta_dot;
    kinetic + p.pend_mass * p.gravity * p.half_length * s.theta.cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upright_rest_is_equilibrium() {
        let p = PendulumParams::<f64>::default();
        assert_eq!(pendulum_accel(&PendulumState::default(), 0.0, &p).unwrap(), (0.0, 0.0));
        let s = rk4_step(&PendulumState::default(), 0.0, 0.1, &p).unwrap();
        assert_eq!(s, PendulumState::default());
    }

    #[test]
    fn default_mass_matrix() {
        let m = mass_matrix(0.0, &PendulumParams::<f64>::default());
        assert!((m[0][0] - 2.0).abs() < 1e-15);
        assert!((m[0][1] + 0.7).abs() < 1e-15);
        assert!((m[1][0] + 0.7).abs() < 1e-15);
        assert!((m[1][1] - 1.82).abs() < 1e-15);
    }

    #[test]
    fn upright_is_unstable() {
        let p = PendulumParams::<f64>::default();
        for eps in [1e-3, -1e-3, 0.2, -0.2] {
            let (_, th) = pendulum_accel(&PendulumState::new(0.0, eps, 0.0, 0.0), 0.0, &p).unwrap();
            assert_eq!(th.signum(), eps.signum());
        }
    }

    #[test]
    fn friction_saturates_and_is_odd() {
        let p = PendulumParams::<f64>::default();
        assert_eq!(friction_forces(0.0, 0.0, &p), (0.0, 0.0));
        let (fx, ft) = friction_forces(1e3, 1e3, &p);
        assert!((fx - 0.028).abs() < 1e-15 && (ft - 0.0032).abs() < 1e-15);
        let (a, b) = friction_forces(0.7, -0.3, &p);
        let (c, d) = friction_forces(-0.7, 0.3, &p);
        assert_eq!((a, b), (-c, -d));
    }

    #[test]
    fn validation() {
        let mut p = PendulumParams::<f64>::default();
        assert!(p.validate().is_ok());
        assert!(p.frictionless().validate().is_ok());
        p.inertia = 0.0;
        assert!(p.validate().is_err());
        assert!(rk4_step(&PendulumState::default(), 0.0, 0.0, &PendulumParams::<f64>::default()).is_err());
    }

    #[test]
    fn mass_matrix_determinant_bounded_below() {
        let p = PendulumParams::<f64>::default();
        for i in 0..720 {
            let m = mass_matrix(i as f64 * 0.01, &p);
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert!(det >= 2.0 * 1.82 - 0.49 - 1e-12);
        }
    }
}
