//! Exact second-order ultra-local model used to check the controller.

use crate::error::{check_dim, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

/// `y_{k+2} = 2·y_{k+1} − y_k + F_k + G_k·u_k`.
pub fn synthetic_ulm_plant_step<T: Real>(
    y_k: &[T],
    y_kp1: &[T],
    f_k: &[T],
    g_k: &Matrix<T>,
    u_k: &[T],
) -> Result<Vec<T>> {
    let l = y_k.len();
    check_dim(l, y_kp1.len())?;
    check_dim(l, f_k.len())?;
    check_dim(l, g_k.rows())?;
    let gu = g_k.mul_vec(u_k)?;
    let two = T::lit(2.0);
    Ok((0..l).map(|i| two * y_kp1[i] - y_k[i] + f_k[i] + gu[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = Matrix::scalar(1.0);
        assert_eq!(synthetic_ulm_plant_step(&[0.0], &[0.0], &[0.0], &g, &[0.0]).unwrap(), vec![0.0]);
        assert_eq!(synthetic_ulm_plant_step(&[0.0], &[1.0], &[0.0], &g, &[0.0]).unwrap(), vec![2.0]);
        assert!(synthetic_ulm_plant_step(&[0.0], &[1.0, 2.0], &[0.0], &g, &[0.0]).is_err());
    }
}
