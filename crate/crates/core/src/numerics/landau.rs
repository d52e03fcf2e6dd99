use crate::error::{Error, Result};
use crate::scalar::Real;

/// `ln k!` by direct summation.
pub fn ln_factorial<T: Real>(k: usize) -> T {
    (2..=k).map(|i| T::from_usize_lossy(i).ln()).sum()
}

/// `log(2^{k+1} π B^{k−1} k!)`, the squared L² norm of `(d*)ᵏ e^{−B|x|²/4}`
/// for the constant field `B` in symmetric gauge.
pub fn log_landau_norm_sq<T: Real>(k: usize, b: T) -> Result<T> {
    if !(b > T::zero() && b.is_finite()) {
        return Err(Error::Domain(format!("field strength must be > 0, got {b}")));
    }
    let kf = T::from_usize_lossy(k);
    Ok((kf + T::one()) * T::LN_2() + T::PI().ln() + (kf - T::one()) * b.ln() + ln_factorial::<T>(k))
}

/// Regularized upper incomplete gamma `Γ(k+1, x)/k!` for integer `k`,
/// `e^{−x} Σ_{i≤k} xⁱ/i!`, summed in log-space.
pub fn upper_gamma_regularized_int<T: Real>(k: usize, x: T) -> T {
    if x <= T::zero() {
        return T::one();
    }
    let lx = x.ln();
    let logs: Vec<T> = (0..=k).map(|i| T::from_usize_lossy(i) * lx - ln_factorial::<T>(i) - x).collect();
    let m = logs.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
    (m + logs.iter().map(|&l| (l - m).exp()).sum::<T>().ln()).exp().min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_examples() {
        assert_relative_eq!(log_landau_norm_sq(0, 1.0).unwrap(), (2.0 * PI).ln(), epsilon = 1e-15);
        assert_relative_eq!(log_landau_norm_sq(1, 2.0).unwrap(), (4.0 * PI).ln(), epsilon = 1e-15);
        assert!(log_landau_norm_sq(3, 0.0).is_err());
        assert!(log_landau_norm_sq(10_000, 3.0f64).unwrap().is_finite());
    }

    #[test]
    fn incomplete_gamma_small_cases() {
        assert_relative_eq!(upper_gamma_regularized_int(0, 2.0), (-2.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(upper_gamma_regularized_int(1, 2.0), 3.0 * (-2.0f64).exp(), epsilon = 1e-15);
        assert_eq!(upper_gamma_regularized_int(4, 0.0), 1.0);
    }
}
