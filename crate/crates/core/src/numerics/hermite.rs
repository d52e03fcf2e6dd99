//! L²-normalized Hermite functions `φₙ(x) = (2ⁿn!√π)^{−1/2} Hₙ(x) e^{−x²/2}`.
//!
//! The three-term recurrence runs on the polynomial part with the Gaussian
//! factor and any rescaling kept as a separate logarithm, so neither large
//! orders nor large arguments overflow or underflow prematurely.

use crate::error::{Error, Result};
use crate::numerics::quadrature::QuadratureRule;
use crate::scalar::{pairwise_sum, Real};

/// `φₙ(x)` represented as `sign · exp(log_abs)`; `log_abs = −∞` for zeros.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogHermite<T> {
    pub sign: T,
    pub log_abs: T,
}

impl<T: Real> LogHermite<T> {
    pub fn value(self) -> T {
        self.sign * self.log_abs.exp()
    }
}

/// `φₖ(x)` for all `k = 0..=n_max`, in log-magnitude form.
pub fn hermite_phi_log_all<T: Real>(n_max: usize, x: T) -> Vec<LogHermite<T>> {
    let big = T::max_value().sqrt().sqrt();
    let log_big = big.ln();
    let gauss = -x * x * T::lit(0.5);
    let two = T::lit(2.0);
    let mut out = Vec::with_capacity(n_max + 1);
    let mut push = |v: T, log_scale: T| {
        let log_abs = if v == T::zero() { T::neg_infinity() } else { v.abs().ln() + log_scale + gauss };
        out.push(LogHermite { sign: v.signum(), log_abs });
    };
    // Unscaled recurrence values are φₖ(x)·e^{x²/2}·e^{−log_scale}.
    let mut prev = T::PI().powf(T::lit(-0.25));
    let mut log_scale = T::zero();
    push(prev, log_scale);
    if n_max == 0 {
        return out;
    }
    let mut cur = two.sqrt() * x * prev;
    push(cur, log_scale);
    for k in 1..n_max {
        let kf = T::from_usize_lossy(k);
        let next = x * (two / (kf + T::one())).sqrt() * cur - (kf / (kf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > big {
            prev /= big;
            cur /= big;
            log_scale += log_big;
        }
        push(cur, log_scale);
    }
    out
}

/// `φₙ(x)` in log-magnitude form.
pub fn hermite_phi_log<T: Real>(n: usize, x: T) -> LogHermite<T> {
    *hermite_phi_log_all(n, x).last().expect("non-empty")
}

/// The normalized Hermite function `φₙ(x)`.
pub fn hermite_phi<T: Real>(n: usize, x: T) -> T {
    hermite_phi_log(n, x).value()
}

/// `φₖ(x)` for `k = 0..=n_max`.
pub fn hermite_phi_all<T: Real>(n_max: usize, x: T) -> Vec<T> {
    hermite_phi_log_all(n_max, x).into_iter().map(LogHermite::value).collect()
}

/// `log ∫_{a}^{∞} φₙ(x)² dx` with `a = √(n^{1+ε})`.
///
/// The integrand is scaled by its largest sample before summation; the upper
/// limit is where the integrand has fallen 700 e-folds below that maximum
/// (below 1e-300 relative), searched in unit steps past the turning point.
pub fn log_hermite_tail<T: Real>(n: usize, eps: T, rule: &QuadratureRule<T>) -> Result<T> {
    if n == 0 {
        return Err(Error::Domain("hermite tail needs n >= 1".into()));
    }
    if !(eps > T::zero()) {
        return Err(Error::Domain(format!("hermite tail needs eps > 0, got {eps}")));
    }
    let nf = T::from_usize_lossy(n);
    log_tail_from(n, nf.powf(T::one() + eps).sqrt(), rule)
}

/// `log ∫_{a}^{∞} φₙ(x)² dx` for an arbitrary lower limit `a`.
pub fn log_tail_from<T: Real>(n: usize, a: T, rule: &QuadratureRule<T>) -> Result<T> {
    let nf = T::from_usize_lossy(n);
    let turning = (T::lit(2.0) * nf + T::one()).sqrt();
    let log_sq = |x: T| T::lit(2.0) * hermite_phi_log(n, x).log_abs;
    let cutoff = T::lit(700.0);
    // Past the turning point log φₙ² is concave decreasing.
    let peak_ref = if a >= turning { log_sq(a) } else { T::zero() };
    let mut upper = a.max(turning);
    while log_sq(upper) > peak_ref - cutoff {
        upper += T::one();
    }
    let panels = rule.panels().max(((upper - a).to_f64_lossy().ceil() as usize) * 2).max(1);
    let composite = rule.with_panels(panels);
    let samples: Vec<(T, T)> = composite.mapped(a, upper).into_iter().map(|(x, w)| (w, log_sq(x))).collect();
    let peak = samples.iter().fold(T::neg_infinity(), |m, &(_, l)| m.max(l));
    if !peak.is_finite() {
        return Err(Error::NonFinite("hermite tail integrand vanished on every node".into()));
    }
    let terms: Vec<T> = samples.iter().map(|&(w, l)| w * (l - peak).exp()).collect();
    Ok(peak + pairwise_sum(&terms).ln())
}

/// Tail mass `∫_{√(n^{1+ε})}^{∞} φₙ(x)² dx` of the normalized Hermite function.
///
/// This is the normalized-function form; the unnormalized expression
/// `(2ⁿn!)^{−1}∫ Hₙ(x)² e^{−x²} dx` over the same range equals `√π` times this.
/// The value underflows to zero for large `n`; use [`log_hermite_tail`] when
/// comparing such tails.
pub fn hermite_tail<T: Real>(n: usize, eps: T, rule: &QuadratureRule<T>) -> Result<T> {
    log_hermite_tail(n, eps, rule).map(T::exp)
}
