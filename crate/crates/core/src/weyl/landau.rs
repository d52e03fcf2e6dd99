use num_complex::Complex;

use crate::geom::Vec2;
use crate::numerics::landau::log_landau_norm_sq;
use crate::scalar::Real;
use crate::Result;

/// Normalized lowest-band state `ψ = (d_n*)ᵏ G / ‖(d_n*)ᵏ G‖` of the constant
/// field `B_n` in the symmetric gauge centered at `x_n`, with
/// `G = exp(−B_n|x − x_n|²/4)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LandauSample<T> {
    pub value: Complex<T>,
    /// `(−i∇ − A_n)ψ`.
    pub covariant_gradient: [Complex<T>; 2],
}

/// Precomputed normalization for repeated evaluation of one state.
#[derive(Clone, Copy, Debug)]
pub struct LandauState<T> {
    pub k: usize,
    pub b_n: T,
    pub x_n: Vec2<T>,
    log_norm: T,
}

impl<T: Real> LandauState<T> {
    pub fn new(k: usize, b_n: T, x_n: Vec2<T>) -> Result<Self> {
        let log_norm = log_landau_norm_sq(k, b_n)?;
        Ok(Self { k, b_n, x_n, log_norm })
    }

    /// `‖(d_n*)ᵏ G‖²` in log form.
    pub fn log_norm_sq(&self) -> T {
        self.log_norm
    }

    // c · (iB)^m w̄^p G / ‖ψ‖, assembled from logs.
    fn monomial(&self, m: usize, p: usize, w: Vec2<T>) -> Complex<T> {
        let rho2 = w.norm_sq();
        if p > 0 && rho2 == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        let b = self.b_n;
        let mut log_mag = T::from_usize_lossy(m) * b.ln() - b * rho2 / T::lit(4.0) - T::lit(0.5) * self.log_norm;
        let mut phase = T::from_usize_lossy(m) * T::FRAC_PI_2();
        if p > 0 {
            log_mag += T::from_usize_lossy(p) * T::lit(0.5) * rho2.ln();
            phase -= T::from_usize_lossy(p) * w.y.atan2(w.x);
        }
        Complex::from_polar(log_mag.exp(), phase)
    }

    pub fn value(&self, x: Vec2<T>) -> Complex<T> {
        self.monomial(self.k, self.k, x - self.x_n)
    }

    pub fn sample(&self, x: Vec2<T>) -> LandauSample<T> {
        self.sample_offset(x - self.x_n)
    }

    /// [`Self::sample`] at `x_n + w`.
    pub fn sample_offset(&self, w: Vec2<T>) -> LandauSample<T> {
        let value = self.monomial(self.k, self.k, w);
        // d*ψ = iB w̄ ψ and dψ = −2ik (iB)ᵏ w̄^{k−1} G / ‖·‖.
        let d_star = self.monomial(self.k + 1, self.k + 1, w);
        let d = if self.k == 0 {
            Complex::new(T::zero(), T::zero())
        } else {
            self.monomial(self.k, self.k - 1, w) * Complex::new(T::zero(), -T::lit(2.0) * T::from_usize_lossy(self.k))
        };
        let half = T::lit(0.5);
        let p1 = (d + d_star) * half;
        let p2 = (d - d_star) * Complex::new(T::zero(), -half);
        LandauSample { value, covariant_gradient: [p1, p2] }
    }
}

/// One-shot evaluation of [`LandauState::sample`].
pub fn landau_psi<T: Real>(k: usize, b_n: T, x_n: Vec2<T>, x: Vec2<T>) -> Result<LandauSample<T>> {
    Ok(LandauState::new(k, b_n, x_n)?.sample(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::symmetric_a_n;
    use crate::numerics::landau::ln_factorial;
    use approx::assert_relative_eq;
    use std::collections::BTreeMap;

    type C = Complex<f64>;

    // Polynomials in (w, w̄) times G, as maps (a, b) ↦ coefficient of w^a w̄^b.
    fn apply_d_star(poly: &BTreeMap<(usize, usize), C>, b: f64) -> BTreeMap<(usize, usize), C> {
        // d* = −i(2∂_w − (B/2)w̄) and ∂_w G = −(B/4) w̄ G.
        let mut out: BTreeMap<(usize, usize), C> = BTreeMap::new();
        let mi = C::new(0.0, -1.0);
        for (&(a, bb), &c) in poly {
            if a > 0 {
                *out.entry((a - 1, bb)).or_default() += mi * c * 2.0 * a as f64;
            }
            *out.entry((a, bb + 1)).or_default() += mi * c * (-b);
        }
        out
    }

    fn eval(poly: &BTreeMap<(usize, usize), C>, b: f64, w: C) -> C {
        let g = (-b * w.norm_sqr() / 4.0).exp();
        poly.iter().map(|(&(a, bb), &c)| c * w.powu(a as u32) * w.conj().powu(bb as u32)).sum::<C>() * g
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 11) as f64) / ((1u64 << 53) as f64)
        }
    }

    #[test]
    fn closed_form_matches_recursive_d_star() {
        let mut rng = Lcg(7);
        for &b in &[0.5, 1.0, 3.0] {
            let x_n = Vec2::new(0.3, -1.1);
            let mut poly: BTreeMap<(usize, usize), C> = BTreeMap::new();
            poly.insert((0, 0), C::new(1.0, 0.0));
            for k in 0..=5usize {
                let state = LandauState::<f64>::new(k, b, x_n).unwrap();
                let scale = (0.5 * state.log_norm_sq()).exp();
                for _ in 0..20 {
                    let x = x_n + Vec2::new(4.0 * rng.next() - 2.0, 4.0 * rng.next() - 2.0);
                    let w = C::new(x.x - x_n.x, x.y - x_n.y);
                    let oracle = eval(&poly, b, w);
                    let got = state.value(x) * scale;
                    assert!((got - oracle).norm() <= 1e-10 * oracle.norm().max(1.0), "k={k} b={b}");
                }
                poly = apply_d_star(&poly, b);
            }
        }
    }

    #[test]
    fn ground_state_gradient_magnitude() {
        // (−i∇ − A)G = (B/2)(w₂ + iw₁, iw₂ − w₁)G, whose modulus is (B/√2)|w||G|.
        let b = 2.5;
        let x_n = Vec2::new(1.0, 2.0);
        let x = Vec2::new(1.7, 1.2);
        let s = landau_psi::<f64>(0, b, x_n, x).unwrap();
        let w = x - x_n;
        let mag = (s.covariant_gradient[0].norm_sqr() + s.covariant_gradient[1].norm_sqr()).sqrt();
        assert_relative_eq!(mag, b / 2f64.sqrt() * w.norm() * s.value.norm(), max_relative = 1e-13);
        let g = (-b * w.norm_sq() / 4.0).exp() / (2.0 * std::f64::consts::PI / b).sqrt();
        assert_relative_eq!(s.value.re, g, max_relative = 1e-13);
        assert_eq!(s.value.im, 0.0);
    }

    #[test]
    fn vanishes_at_center_for_k_one() {
        let s = landau_psi(1, 1.0, Vec2::new(0.5, 0.5), Vec2::new(0.5, 0.5)).unwrap();
        assert_eq!(s.value, C::new(0.0, 0.0));
        assert!(s.covariant_gradient[0].norm() > 0.0);
    }

    #[test]
    fn covariant_gradient_matches_finite_differences() {
        let b = 1.7;
        let x_n = Vec2::new(-0.4, 0.9);
        let h = 1e-5;
        for k in [0usize, 1, 3, 6] {
            let st = LandauState::new(k, b, x_n).unwrap();
            let x = Vec2::new(0.8, 1.6);
            let a = symmetric_a_n(b, x_n, x).a;
            let fx = (st.value(x + Vec2::new(h, 0.0)) - st.value(x - Vec2::new(h, 0.0))) / (2.0 * h);
            let fy = (st.value(x + Vec2::new(0.0, h)) - st.value(x - Vec2::new(0.0, h))) / (2.0 * h);
            let v = st.value(x);
            let p1 = C::new(0.0, -1.0) * fx - v * a.x;
            let p2 = C::new(0.0, -1.0) * fy - v * a.y;
            let s = st.sample(x);
            assert!((s.covariant_gradient[0] - p1).norm() < 1e-8, "k={k}");
            assert!((s.covariant_gradient[1] - p2).norm() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn large_index_stays_finite() {
        let st = LandauState::new(200, 1e6, Vec2::new(1e5, 0.0)).unwrap();
        let peak = Vec2::new(1e5 + (2.0 * 200.0 / 1e6f64).sqrt(), 0.0);
        let v = st.sample(peak);
        assert!(v.value.norm().is_finite() && v.value.norm() > 0.0);
        assert!(ln_factorial::<f64>(200).is_finite());
    }
}
