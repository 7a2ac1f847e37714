//! Hölder-continuous gain, forward differences and the finite-time
//! Lyapunov recursion.

use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::Real;

/// Weight of the quadratic form `errᵀ·W·err` inside the gain.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight<T> {
    /// `W = I` of whatever dimension the error has.
    Identity,
    /// `W = w·I`, `w > 0`.
    Uniform(T),
    /// Full symmetric positive definite matrix.
    Matrix(Matrix<T>),
}

impl<T: Real> Weight<T> {
    fn validate(&self) -> Result<()> {
        match self {
            Weight::Identity => Ok(()),
            Weight::Uniform(w) => {
                if *w > T::zero() && w.is_finite() {
                    Ok(())
                } else {
                    Err(invalid("weight", format!("scalar weight must be positive, got {w}")))
                }
            }
            Weight::Matrix(m) => {
                if !m.is_square() {
                    return Err(invalid("weight", "matrix weight must be square"));
                }
                let tol = T::epsilon() * T::lit(16.0) * (0..m.rows()).map(|i| m.get(i, i).abs()).fold(T::one(), T::max);
                if !m.is_symmetric(tol) {
                    return Err(invalid("weight", "matrix weight must be symmetric"));
                }
                if m.cholesky(T::epsilon()).is_none() {
                    return Err(invalid("weight", "matrix weight must be positive definite"));
                }
                Ok(())
            }
        }
    }

    /// Dimension the weight pins, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Weight::Matrix(m) => Some(m.rows()),
            _ => None,
        }
    }

    /// `errᵀ·W·err`.
    pub fn quadratic_form(&self, err: &[T]) -> Result<T> {
        match self {
            Weight::Identity => Ok(dot(err, err)),
            Weight::Uniform(w) => Ok(*w * dot(err, err)),
            Weight::Matrix(m) => {
                check_dim(m.rows(), err.len())?;
                m.quadratic_form(err)
            }
        }
    }
}

/// `(W, margin, exponent)` of a gain `((eᵀWe)^a − margin)/((eᵀWe)^a + margin)`
/// with `a = 1 − 1/exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderGainParams<T> {
    weight: Weight<T>,
    margin: T,
    exponent: T,
}

impl<T: Real> HolderGainParams<T> {
    pub fn new(weight: Weight<T>, margin: T, exponent: T) -> Result<Self> {
        weight.validate()?;
        if !(margin > T::zero()) || !margin.is_finite() {
            return Err(invalid("margin", format!("must be positive, got {margin}")));
        }
        if !(exponent > T::one() && exponent < T::lit(2.0)) {
            return Err(invalid("exponent", format!("must lie in (1, 2), got {exponent}")));
        }
        Ok(Self {
            weight,
            margin,
            exponent,
        })
    }

    pub fn identity(margin: T, exponent: T) -> Result<Self> {
        Self::new(Weight::Identity, margin, exponent)
    }

    pub fn weight(&self) -> &Weight<T> {
        &self.weight
    }

    pub fn margin(&self) -> T {
        self.margin
    }

    pub fn exponent(&self) -> T {
        self.exponent
    }

    /// `1 − 1/exponent`, in `(0, 1/2)`.
    pub fn power(&self) -> T {
        T::one() - self.exponent.recip()
    }

    /// `(errᵀ·W·err)^(1 − 1/exponent)`.
    pub fn holder_power(&self, err: &[T]) -> Result<T> {
        let x = self.weight.quadratic_form(err)?;
        Ok(pow_or_zero(x, self.power()))
    }

    pub fn gain(&self, err: &[T]) -> Result<T> {
        let h = self.holder_power(err)?;
        Ok((h - self.margin) / (h + self.margin))
    }

    /// `gain(err)·err`.
    pub fn scaled_step(&self, err: &[T]) -> Result<Vec<T>> {
        let g = self.gain(err)?;
        Ok(err.iter().map(|&e| g * e).collect())
    }

    /// `1 − gain(err) = 2·margin/((errᵀWerr)^a + margin)`, computed without
    /// cancellation.
    pub fn complement(&self, err: &[T]) -> Result<T> {
        let h = self.holder_power(err)?;
        Ok(T::lit(2.0) * self.margin / (h + self.margin))
    }
}

/// `x^a` as `exp(a·ln x)`, with `0` for `x ≤ 0`.
#[inline]
pub(crate) fn pow_or_zero<T: Real>(x: T, a: T) -> T {
    if x > T::zero() {
        (a * x.ln()).exp()
    } else {
        T::zero()
    }
}

pub fn holder_gain<T: Real>(err: &[T], params: &HolderGainParams<T>) -> Result<T> {
    params.gain(err)
}

/// Order-`order` forward difference of a vector series. The result is
/// `order` samples shorter than the input.
pub fn forward_difference<T: Real>(series: &[Vec<T>], order: usize) -> Result<Vec<Vec<T>>> {
    if series.len() <= order {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            order,
        });
    }
    let dim = series[0].len();
    for v in series {
        check_dim(dim, v.len())?;
    }
    let mut cur = series.to_vec();
    for _ in 0..order {
        cur = cur
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(&b, &a)| b - a).collect())
            .collect();
    }
    Ok(cur)
}

/// Highest-order forward difference of a window of `n + 1` samples, taken
/// at the oldest sample: `Σ (−1)^(n−j)·C(n, j)·w_j`.
pub(crate) fn window_difference<T: Real>(window: &[Vec<T>]) -> Vec<T> {
    let n = window.len() - 1;
    let dim = window[0].len();
    let mut out = vec![T::zero(); dim];
    let mut binom = 1.0f64;
    for j in 0..=n {
        let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
        let c = T::lit(sign * binom);
        for (o, &w) in out.iter_mut().zip(&window[j]) {
            *o = *o + c * w;
        }
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    out
}

/// Inputs of the recursion `c_{k+1} = c_k − a_k·c_k^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovRecursionSpec<T> {
    alpha: T,
    c0: T,
    ratios: Vec<T>,
    max_steps: usize,
}

impl<T: Real> LyapunovRecursionSpec<T> {
    /// `ratios` lists `a_0, a_1, …`; the last entry is repeated once the list
    /// runs out, and an empty list means `a_k ≡ 1`. When given, `a_0` must be 1.
    pub fn new(alpha: T, c0: T, ratios: Vec<T>, max_steps: usize) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if !(c0 >= T::zero()) || !c0.is_finite() {
            return Err(invalid("c0", format!("must be finite and non-negative, got {c0}")));
        }
        if ratios.iter().any(|&a| !(a > T::zero()) || !a.is_finite()) {
            return Err(invalid("ratios", "every ratio must be positive and finite"));
        }
        if let Some(&a0) = ratios.first() {
            if a0 != T::one() {
                return Err(invalid("ratios", format!("first ratio must be 1, got {a0}")));
            }
        }
        if max_steps == 0 {
            return Err(invalid("max_steps", "must be positive"));
        }
        Ok(Self {
            alpha,
            c0,
            ratios,
            max_steps,
        })
    }

    /// Constant ratios `a_k ≡ 1`.
    pub fn unit(alpha: T, c0: T, max_steps: usize) -> Result<Self> {
        Self::new(alpha, c0, Vec::new(), max_steps)
    }

    fn ratio(&self, k: usize) -> T {
        match self.ratios.last() {
            None => T::one(),
            Some(&last) => self.ratios.get(k).copied().unwrap_or(last),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovTrace<T> {
    pub values: Vec<T>,
    /// First index with `c_N = 0`, if reached within the step budget.
    pub finite_step: Option<usize>,
}

pub fn lyapunov_recursion<T: Real>(spec: &LyapunovRecursionSpec<T>) -> LyapunovTrace<T> {
    let mut values = vec![spec.c0];
    if spec.c0 == T::zero() {
        return LyapunovTrace {
            values,
            finite_step: Some(0),
        };
    }
    let mut c = spec.c0;
    for k in 0..spec.max_steps {
        let next = c - spec.ratio(k) * c.powf(spec.alpha);
        if next <= T::zero() {
            values.push(T::zero());
            return LyapunovTrace {
                values,
                finite_step: Some(k + 1),
            };
        }
        values.push(next);
        c = next;
    }
    LyapunovTrace {
        values,
        finite_step: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatioBound<T> {
    pub delta: T,
    /// Lower bound on `γ_k/γ_0` while `V_k ∈ (χ·V_0, V_0)`.
    pub a_lower: T,
    /// `1 − a_lower`.
    pub epsilon: T,
}

pub fn gamma_ratio_bound<T: Real>(chi: T, mu: T, exponent: T) -> Result<GammaRatioBound<T>> {
    if !(chi > T::zero() && chi < T::one()) {
        return Err(invalid("chi", format!("must lie in (0, 1), got {chi}")));
    }
    if !(mu > T::zero()) || !mu.is_finite() {
        return Err(invalid("mu", format!("must be positive, got {mu}")));
    }
    if !(exponent > T::one() && exponent < T::lit(2.0)) {
        return Err(invalid("exponent", format!("must lie in (1, 2), got {exponent}")));
    }
    let ca = chi.powf(T::one() - exponent.recip());
    let delta = mu * (T::one() - ca) / (ca + mu);
    let one_minus = T::one() - delta;
    Ok(GammaRatioBound {
        delta,
        a_lower: one_minus * one_minus,
        epsilon: T::lit(2.0) * delta - delta * delta,
    })
}
