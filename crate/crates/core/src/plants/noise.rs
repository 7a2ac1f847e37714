//! Bounded measurement noise drawn from a bump-shaped density.

use std::marker::PhantomData;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<T> {
    /// Total support length; samples lie in `(−width/2, width/2)`.
    pub width: T,
    pub seed: u64,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(width: T, seed: u64) -> Result<Self> {
        if !(width > T::zero()) || !width.is_finite() {
            return Err(invalid("width", format!("must be positive, got {width}")));
        }
        Ok(Self { width, seed })
    }
}

/// Seeded sample stream with density proportional to
/// `exp(−1/(1 − (2s/width)²))` on its support.
#[derive(Debug, Clone)]
pub struct BumpNoise<T> {
    half_width: f64,
    rng: ChaCha8Rng,
    _scalar: PhantomData<T>,
}

impl<T: Real> BumpNoise<T> {
    pub fn new(model: &NoiseModel<T>) -> Self {
        Self {
            half_width: model.width.to_f64().expect("width is finite") / 2.0,
            rng: ChaCha8Rng::seed_from_u64(model.seed),
            _scalar: PhantomData,
        }
    }

    pub fn sample(&mut self) -> T {
        loop {
            let x: f64 = self.rng.gen_range(-1.0..1.0);
            let one_minus = 1.0 - x * x;
            if one_minus <= 0.0 {
                continue;
            }
            // Density relative to its peak value e^(−1).
            let accept = (1.0 - 1.0 / one_minus).exp();
            if self.rng.gen::<f64>() < accept {
                return T::lit(x * self.half_width);
            }
        }
    }
}

pub fn bump_noise_sample<T: Real>(noise: &mut BumpNoise<T>) -> T {
    noise.sample()
}
