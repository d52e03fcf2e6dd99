//! Finite-difference applications of `d = (−i∂₁ − A₁) + i(−i∂₂ − A₂)` and its
//! adjoint, used to check the closed forms of the packets independently.

use num_complex::Complex;

use super::hermite_packet::{landau_momentum, shifted_hermite_state};
use super::landau::LandauState;
use crate::error::Result;
use crate::fields::MagneticField;
use crate::geom::Vec2;
use crate::numerics::quadrature::QuadratureRule;
use crate::scalar::{pairwise_sum, Real};

fn partials<T: Real>(f: &impl Fn(Vec2<T>) -> Complex<T>, x: Vec2<T>, h: T) -> (Complex<T>, Complex<T>) {
    let ex = Vec2::new(h, T::zero());
    let ey = Vec2::new(T::zero(), h);
    let two_h = T::lit(2.0) * h;
    ((f(x + ex) - f(x - ex)) / two_h, (f(x + ey) - f(x - ey)) / two_h)
}

/// Central-difference `d f` at `x`.
pub fn fd_d<T: Real>(f: &impl Fn(Vec2<T>) -> Complex<T>, a: &impl Fn(Vec2<T>) -> Vec2<T>, x: Vec2<T>, h: T) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let (fx, fy) = partials(f, x, h);
    let av = a(x);
    -i * fx + fy - f(x) * Complex::new(av.x, av.y)
}

/// Central-difference `d* f` at `x`.
pub fn fd_d_star<T: Real>(f: &impl Fn(Vec2<T>) -> Complex<T>, a: &impl Fn(Vec2<T>) -> Vec2<T>, x: Vec2<T>, h: T) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let (fx, fy) = partials(f, x, h);
    let av = a(x);
    -i * fx - fy - f(x) * Complex::new(av.x, -av.y)
}

/// `max |d*d ψ − 2kB ψ|` over a fixed set of points around the center, with
/// `d*d` applied by nested central differences of step `h` to the
/// normalized Landau state of level `k`.
pub fn landau_eigen_error<T: Real>(k: usize, b: T, x_n: Vec2<T>, h: T) -> Result<T> {
    let st = LandauState::new(k, b, x_n)?;
    let a = |x: Vec2<T>| Vec2::wedge(T::lit(0.5) * b, x - x_n);
    let psi = |x: Vec2<T>| st.value(x);
    let dpsi = |x: Vec2<T>| fd_d(&psi, &a, x, h);
    let level = T::lit(2.0) * T::from_usize_lossy(k) * b;
    let scale = (T::one() + T::from_usize_lossy(k).sqrt()) / b.sqrt();
    let mut worst = T::zero();
    for ring in 1..=4 {
        let rho = scale * T::lit(0.5) * T::from_usize_lossy(ring);
        for j in 0..6 {
            let th = T::lit(0.37) + T::TAU() * T::from_usize_lossy(j) / T::lit(6.0);
            let x = x_n + Vec2::new(rho * th.cos(), rho * th.sin());
            let lhs = fd_d_star(&dpsi, &a, x, h);
            worst = worst.max((lhs - psi(x) * level).norm());
        }
    }
    Ok(worst)
}

/// Grid check of `(dd* − d*d)φ = 2Bφ` for the Gaussian
/// `φ = exp(−|x − c|²/2)` on a square of half-width `half_width` and spacing
/// `h`: `d` and `d*` are applied as central-difference grid operators, and
/// the maximum error is taken over the inner half of the square.
pub fn commutator_grid_error<T, F>(field: &F, gauge: impl Fn(Vec2<T>) -> Vec2<T>, center: Vec2<T>, half_width: T, h: T) -> T
where
    T: Real,
    F: MagneticField<T> + ?Sized,
{
    let m = (half_width / h).round().to_usize().unwrap_or(1).max(4);
    let n = 2 * m + 1;
    let node = |i: usize, j: usize| {
        center + Vec2::new(h * (T::from_usize_lossy(i) - T::from_usize_lossy(m)), h * (T::from_usize_lossy(j) - T::from_usize_lossy(m)))
    };
    let half = T::lit(0.5);
    let phi: Vec<Complex<T>> = (0..n * n)
        .map(|idx| {
            let x = node(idx / n, idx % n);
            Complex::new((-(x - center).norm_sq() * half).exp(), T::zero())
        })
        .collect();
    let a: Vec<Vec2<T>> = (0..n * n).map(|idx| gauge(node(idx / n, idx % n))).collect();
    let i = Complex::new(T::zero(), T::one());
    let two_h = T::lit(2.0) * h;
    // Applies d (adjoint = false) or d* on the interior of a grid with margin `lo`.
    let apply = |g: &[Complex<T>], lo: usize, adjoint: bool| -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::nan(), T::nan()); n * n];
        for ii in lo..n - lo {
            for jj in lo..n - lo {
                let idx = ii * n + jj;
                let gx = (g[idx + n] - g[idx - n]) / two_h;
                let gy = (g[idx + 1] - g[idx - 1]) / two_h;
                let av = a[idx];
                out[idx] = if adjoint {
                    -i * gx - gy - g[idx] * Complex::new(av.x, -av.y)
                } else {
                    -i * gx + gy - g[idx] * Complex::new(av.x, av.y)
                };
            }
        }
        out
    };
    let d = apply(&phi, 1, false);
    let ds = apply(&phi, 1, true);
    let dds = apply(&ds, 2, false);
    let dsd = apply(&d, 2, true);
    let mut worst = T::zero();
    for ii in 0..n {
        for jj in 0..n {
            let x = node(ii, jj);
            let w = x - center;
            if w.x.abs() > half_width * half || w.y.abs() > half_width * half {
                continue;
            }
            let idx = ii * n + jj;
            let err = (dds[idx] - dsd[idx] - phi[idx] * (T::lit(2.0) * field.value(x))).norm();
            worst = worst.max(err);
        }
    }
    worst
}

/// `(4 f(h/2) − f(h))/3`.
pub fn richardson<T: Real>(coarse: Complex<T>, fine: Complex<T>) -> Complex<T> {
    (fine * T::lit(4.0) - coarse) / T::lit(3.0)
}

/// `L²(dx₁)` norms of `d̃ψₙ − (−i√(2nB₀)ψ_{n−1} + icψₙ)` and
/// `d̃*ψₙ − (i√(2(n+1)B₀)ψ_{n+1} − icψₙ)` with `c = E/(2B₀)`, for the
/// Landau-gauge operator `d̃ = −i∂₁ + ∂₂ − iB₀x₁` applied by
/// Richardson-extrapolated central differences of step `h`. The states are
/// centered at `x₁ = a` with momentum `ξ = B₀a + c` and sampled on the line
/// `x₂ = x2`.
pub fn ladder_errors<T: Real>(n: usize, b0: T, e_n: T, a: T, x2: T, h: T) -> Result<(T, T)> {
    let i = Complex::new(T::zero(), T::one());
    let c = e_n / (T::lit(2.0) * b0);
    let xi = landau_momentum(b0, a, e_n);
    let state = |m: usize| move |x: Vec2<T>| shifted_hermite_state(m, b0, a, xi, x);
    let landau = move |x: Vec2<T>| Vec2::new(T::zero(), b0 * x.x);
    let psi = state(n);
    let d_rich = |x: Vec2<T>| richardson(fd_d(&psi, &landau, x, h), fd_d(&psi, &landau, x, h * T::lit(0.5)));
    let ds_rich = |x: Vec2<T>| richardson(fd_d_star(&psi, &landau, x, h), fd_d_star(&psi, &landau, x, h * T::lit(0.5)));
    let nn = T::from_usize_lossy(n);
    let lower = state(n.saturating_sub(1));
    let upper = state(n + 1);
    let lowering = |x: Vec2<T>| {
        let prev = if n == 0 { Complex::new(T::zero(), T::zero()) } else { lower(x) };
        -i * prev * (T::lit(2.0) * nn * b0).sqrt() + i * psi(x) * c
    };
    let raising = |x: Vec2<T>| i * upper(x) * (T::lit(2.0) * (nn + T::one()) * b0).sqrt() - i * psi(x) * c;
    let half = ((T::from_usize_lossy(2 * n + 1)).sqrt() + T::lit(12.0)) / b0.sqrt();
    let rule = QuadratureRule::gauss_legendre(16, 8 + 2 * n)?;
    let mut e_d = Vec::new();
    let mut e_ds = Vec::new();
    rule.for_each_node(a - half, a + half, |x1, w| {
        let x = Vec2::new(x1, x2);
        e_d.push(w * (d_rich(x) - lowering(x)).norm_sqr());
        e_ds.push(w * (ds_rich(x) - raising(x)).norm_sqr());
    });
    Ok((pairwise_sum(&e_d).sqrt(), pairwise_sum(&e_ds).sqrt()))
}
