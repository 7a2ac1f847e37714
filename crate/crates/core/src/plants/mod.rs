//! Ground-truth plants and signal sources used to exercise the estimators
//! and controllers.

pub mod noise;
pub mod pendulum;
pub mod synthetic;
pub mod trajectory;

pub use noise::{bump_noise_sample, BumpNoise, NoiseModel};
pub use pendulum::{
    energy, friction_forces, mass_matrix, pendulum_accel, propagate, rk4_step, PendulumParams, PendulumState,
};
pub use synthetic::synthetic_ulm_plant_step;
pub use trajectory::{desired_force, generate_desired_samples, generate_desired_trajectory, sample_count, DesiredSample};
