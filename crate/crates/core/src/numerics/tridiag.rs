//! Symmetric tridiagonal matrices and bisection on Sturm counts.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric tridiagonal matrix stored as its diagonal (`n` entries) and
/// off-diagonal (`n − 1` entries).
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSym<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
}

impl<T: Real> TridiagonalSym<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.len() < 2 {
            return Err(Error::Domain(format!("tridiagonal matrix needs n >= 2, got {}", diag.len())));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "off-diagonal length {} does not match n − 1 = {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("tridiagonal entries must be finite".into()));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.diag.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { T::zero() };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { T::zero() };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Smallest pivot magnitude allowed in the Sturm recurrence.
    fn pivot_floor(&self) -> T {
        let emax = self.offdiag.iter().fold(T::one(), |m, e| m.max(*e * *e));
        T::min_positive_value() * emax / T::epsilon()
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn sturm_count(&self, lambda: T) -> usize {
        sturm_count_with_floor(&self.diag, &self.offdiag, lambda, self.pivot_floor())
    }

    /// All eigenvalues in `[a, b)`, ascending, each bracketed to width ≤ `tol`.
    pub fn eig_window(&self, a: T, b: T, tol: T) -> Result<Vec<T>> {
        eig_window(self, a, b, tol)
    }
}

fn sturm_count_with_floor<T: Real>(diag: &[T], offdiag: &[T], lambda: T, floor: T) -> usize {
    // Negative pivots of the LDLᵀ factorization of T − λI.
    let mut count = 0;
    let mut q = diag[0] - lambda;
    for i in 0.. {
        if q.abs() < floor {
            q = if q < T::zero() { -floor } else { floor };
        }
        if q < T::zero() {
            count += 1;
        }
        if i + 1 == diag.len() {
            break;
        }
        let e = offdiag[i];
        q = diag[i + 1] - lambda - e * e / q;
    }
    count
}

/// Number of eigenvalues of `t` strictly below `lambda`.
pub fn sturm_count<T: Real>(t: &TridiagonalSym<T>, lambda: T) -> usize {
    t.sturm_count(lambda)
}

/// Looser of 1e-10 absolute and 1e-12 relative.
pub fn default_eig_tolerance<T: Real>(scale: T) -> T {
    T::lit(1e-10).max(T::lit(1e-12) * scale.abs())
}

/// Eigenvalues of `t` in `[a, b)` by bisection on Sturm counts.
///
/// Intervals are split recursively, reusing counts at the split points, until
/// each bracket holding eigenvalues is no wider than `tol`; the bracket
/// midpoint is reported once per eigenvalue inside it.
pub fn eig_window<T: Real>(t: &TridiagonalSym<T>, a: T, b: T, tol: T) -> Result<Vec<T>> {
    if !(a < b) {
        return Err(Error::Domain(format!("eigenvalue window needs a < b, got [{a}, {b})")));
    }
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!("bisection tolerance must be > 0, got {tol}")));
    }
    let (glo, ghi) = t.gershgorin();
    let lo = a.max(glo - T::one());
    let hi = b.min(ghi + T::one());
    let mut out = Vec::new();
    if !(lo < hi) {
        return Ok(out);
    }
    // No eigenvalue lies outside the Gershgorin enclosure, so counts at the
    // clipped bounds equal those at a and b.
    let count_lo = t.sturm_count(lo);
    let count_hi = t.sturm_count(hi);
    if count_hi <= count_lo {
        return Ok(out);
    }
    // Explicit stack: (left, right, count_left, count_right); right first so
    // that pops come out in ascending order.
    let mut stack = vec![(lo, hi, count_lo, count_hi)];
    while let Some((l, r, cl, cr)) = stack.pop() {
        if cr == cl {
            continue;
        }
        let mid = l + (r - l) * T::lit(0.5);
        if r - l <= tol || mid <= l || mid >= r {
            out.extend(std::iter::repeat_n(mid, cr - cl));
            continue;
        }
        let cm = t.sturm_count(mid);
        stack.push((mid, r, cm, cr));
        stack.push((l, mid, cl, cm));
    }
    Ok(out)
}
