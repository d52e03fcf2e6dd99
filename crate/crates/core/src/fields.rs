//! Magnetic-field and potential families, their derivatives, and the gauges
//! used to build trial functions: rotational, symmetric (centered) and the
//! line-integral gauge `Ã_n`.
//!
//! Conventions: `curl A = ∂₁A₂ − ∂₂A₁`, natural units, and
//! `a ∧ v = a·(−v₂, v₁)` for a scalar `a` and planar vector `v`.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::numerics::quadrature::QuadratureRule;
use crate::scalar::Real;

/// A scalar magnetic field `B: ℝ² → ℝ`.
pub trait MagneticField<T: Real>: Send + Sync {
    fn value(&self, x: Vec2<T>) -> T;
    fn gradient(&self, x: Vec2<T>) -> Vec2<T>;

    /// `B(base + w) − B(base)`, overridden where it can be formed without
    /// cancellation.
    fn difference(&self, base: Vec2<T>, w: Vec2<T>) -> T {
        self.value(base + w) - self.value(base)
    }
}

/// A rotationally symmetric field `B(x) = b(|x|)` with its rotational gauge
/// `A(x) = A(r)/r · (−x₂, x₁)`, `A(r) = (1/r)∫₀ʳ b(u) u du`.
pub trait RadialField<T: Real>: MagneticField<T> {
    fn profile(&self, r: T) -> T;
    fn rotational_a(&self, r: T) -> Result<T>;
    fn rotational_a_prime(&self, r: T) -> Result<T>;
}

/// Value, gradient and spectral norm of the Hessian of a potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialDerivatives<T> {
    pub value: T,
    pub gradient: Vec2<T>,
    pub hessian_norm: T,
}

/// A scalar potential `V: ℝ² → ℝ`.
pub trait Potential<T: Real>: Send + Sync {
    fn value(&self, x: Vec2<T>) -> T;
    fn derivatives(&self, x: Vec2<T>) -> Result<PotentialDerivatives<T>>;

    /// `V(base + w) − V(base)`, overridden where it can be formed without
    /// cancellation.
    fn difference(&self, base: Vec2<T>, w: Vec2<T>) -> T {
        self.value(base + w) - self.value(base)
    }
}

/// A rotationally symmetric potential `V(x) = v(|x|)`.
pub trait RadialPotential<T: Real>: Potential<T> {
    fn profile(&self, r: T) -> T;
}

/// `b(r) = b₀·rˢ` with `b₀ > 0`, `s ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawField<T> {
    b0: T,
    s: T,
}

impl<T: Real> PowerLawField<T> {
    pub fn new(b0: T, s: T) -> Result<Self> {
        if !(b0 > T::zero() && b0.is_finite()) {
            return Err(Error::Domain(format!("field amplitude b0 must be > 0, got {b0}")));
        }
        if !(s >= T::zero() && s.is_finite()) {
            return Err(Error::Domain(format!("field exponent s must be >= 0, got {s}")));
        }
        Ok(Self { b0, s })
    }

    /// Constant field `B ≡ b0`.
    pub fn constant(b0: T) -> Result<Self> {
        Self::new(b0, T::zero())
    }

    pub fn b0(&self) -> T {
        self.b0
    }

    pub fn s(&self) -> T {
        self.s
    }

    fn b_prime(&self, r: T) -> T {
        if self.s == T::zero() {
            T::zero()
        } else {
            self.b0 * self.s * r.powf(self.s - T::one())
        }
    }
}

/// `c·(|base + w|ᵖ − |base|ᵖ)` via `expm1`/`ln1p`, accurate for `|w| ≪ |base|`.
fn power_difference<T: Real>(c: T, p: T, base: Vec2<T>, w: Vec2<T>) -> T {
    let r2 = base.norm_sq();
    if p == T::zero() {
        return T::zero();
    }
    if r2 == T::zero() {
        return c * w.norm().powf(p);
    }
    let q = (T::lit(2.0) * base.dot(w) + w.norm_sq()) / r2;
    if q <= -T::one() {
        return c * ((base + w).norm().powf(p) - r2.powf(p * T::lit(0.5)));
    }
    c * r2.powf(p * T::lit(0.5)) * (p * T::lit(0.5) * q.ln_1p()).exp_m1()
}

/// `rᵖ` with the convention `0⁰ = 1`.
fn pow0<T: Real>(r: T, p: T) -> T {
    if p == T::zero() {
        T::one()
    } else {
        r.powf(p)
    }
}

impl<T: Real> MagneticField<T> for PowerLawField<T> {
    fn value(&self, x: Vec2<T>) -> T {
        self.profile(x.norm())
    }

    fn gradient(&self, x: Vec2<T>) -> Vec2<T> {
        let r = x.norm();
        if r == T::zero() || self.s == T::zero() {
            return Vec2::zero();
        }
        x.scale(self.b_prime(r) / r)
    }

    fn difference(&self, base: Vec2<T>, w: Vec2<T>) -> T {
        power_difference(self.b0, self.s, base, w)
    }
}

impl<T: Real> RadialField<T> for PowerLawField<T> {
    fn profile(&self, r: T) -> T {
        self.b0 * pow0(r, self.s)
    }

    fn rotational_a(&self, r: T) -> Result<T> {
        check_radius(r)?;
        let two = T::lit(2.0);
        Ok(self.b0 * r.powf(self.s + T::one()) / (self.s + two))
    }

    fn rotational_a_prime(&self, r: T) -> Result<T> {
        check_radius(r)?;
        let two = T::lit(2.0);
        Ok(self.b0 * (self.s + T::one()) * pow0(r, self.s) / (self.s + two))
    }
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r >= T::zero() && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")))
    }
}

/// `v(r) = v₀·rᵗ` with `v₀ < 0` and `0 ≤ t ≤ 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawPotential<T> {
    v0: T,
    t: T,
}

impl<T: Real> PowerLawPotential<T> {
    pub fn new(v0: T, t: T) -> Result<Self> {
        if !(v0 < T::zero() && v0.is_finite()) {
            return Err(Error::Domain(format!("potential amplitude v0 must be < 0, got {v0}")));
        }
        if !(t >= T::zero() && t <= T::lit(2.0)) {
            return Err(Error::Domain(format!("potential exponent t must lie in [0, 2], got {t}")));
        }
        Ok(Self { v0, t })
    }

    /// Like [`new`](Self::new) but without the `t ≤ 2` restriction; used to
    /// probe the growth-bound check and hypothesis logic outside the
    /// self-adjointness range.
    pub fn unchecked(v0: T, t: T) -> Self {
        Self { v0, t }
    }

    pub fn v0(&self) -> T {
        self.v0
    }

    pub fn t(&self) -> T {
        self.t
    }
}

impl<T: Real> Potential<T> for PowerLawPotential<T> {
    fn value(&self, x: Vec2<T>) -> T {
        self.profile(x.norm())
    }

    fn derivatives(&self, x: Vec2<T>) -> Result<PotentialDerivatives<T>> {
        let r = x.norm();
        let two = T::lit(2.0);
        if r == T::zero() && self.t < two {
            return Err(Error::Domain(
                "potential derivatives are singular at the origin for t < 2".into(),
            ));
        }
        let value = self.profile(r);
        if self.t == T::zero() {
            return Ok(PotentialDerivatives { value, gradient: Vec2::zero(), hessian_norm: T::zero() });
        }
        // ∇(v₀rᵗ) = v₀ t r^{t−2} x; Hessian eigenvalues v₀t(t−1)r^{t−2} (radial)
        // and v₀t r^{t−2} (tangential).
        let base = self.v0 * self.t * pow0(r, self.t - two);
        let gradient = x.scale(base);
        let hessian_norm = base.abs() * (self.t - T::one()).abs().max(T::one());
        Ok(PotentialDerivatives { value, gradient, hessian_norm })
    }

    fn difference(&self, base: Vec2<T>, w: Vec2<T>) -> T {
        power_difference(self.v0, self.t, base, w)
    }
}

impl<T: Real> RadialPotential<T> for PowerLawPotential<T> {
    fn profile(&self, r: T) -> T {
        self.v0 * pow0(r, self.t)
    }
}

/// The zero potential.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ZeroPotential;

impl<T: Real> Potential<T> for ZeroPotential {
    fn value(&self, _x: Vec2<T>) -> T {
        T::zero()
    }

    fn derivatives(&self, _x: Vec2<T>) -> Result<PotentialDerivatives<T>> {
        Ok(PotentialDerivatives { value: T::zero(), gradient: Vec2::zero(), hessian_norm: T::zero() })
    }
}

impl<T: Real> RadialPotential<T> for ZeroPotential {
    fn profile(&self, _r: T) -> T {
        T::zero()
    }
}

/// A constant potential `V ≡ c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantPotential<T>(pub T);

impl<T: Real> Potential<T> for ConstantPotential<T> {
    fn value(&self, _x: Vec2<T>) -> T {
        self.0
    }

    fn derivatives(&self, _x: Vec2<T>) -> Result<PotentialDerivatives<T>> {
        Ok(PotentialDerivatives { value: self.0, gradient: Vec2::zero(), hessian_norm: T::zero() })
    }
}

impl<T: Real> RadialPotential<T> for ConstantPotential<T> {
    fn profile(&self, _r: T) -> T {
        self.0
    }
}

/// An affine potential `V(x) = offset + slope·x` (constant electric field).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearPotential<T> {
    pub offset: T,
    pub slope: Vec2<T>,
}

impl<T: Real> Potential<T> for LinearPotential<T> {
    fn value(&self, x: Vec2<T>) -> T {
        self.offset + self.slope.dot(x)
    }

    fn difference(&self, _base: Vec2<T>, w: Vec2<T>) -> T {
        self.slope.dot(w)
    }

    fn derivatives(&self, x: Vec2<T>) -> Result<PotentialDerivatives<T>> {
        Ok(PotentialDerivatives { value: self.value(x), gradient: self.slope, hessian_norm: T::zero() })
    }
}

/// Vector potential sample with its divergence and curl at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeSample<T> {
    pub a: Vec2<T>,
    pub div_a: T,
    pub curl_a: T,
}

/// Symmetric gauge of the constant field `B_n` centered at `x_n`:
/// `A_n(x) = ½B_n ∧ (x − x_n)`.
pub fn symmetric_a_n<T: Real>(b_n: T, x_n: Vec2<T>, x: Vec2<T>) -> GaugeSample<T> {
    let half = T::lit(0.5);
    GaugeSample { a: Vec2::wedge(half * b_n, x - x_n), div_a: T::zero(), curl_a: b_n }
}

/// Rotational gauge as a planar vector field, `A(x) = A(|x|)/|x| · (−x₂, x₁)`.
pub fn rotational_gauge<T: Real, F: RadialField<T> + ?Sized>(field: &F, x: Vec2<T>) -> Result<Vec2<T>> {
    let r = x.norm();
    if r == T::zero() {
        return Ok(Vec2::zero());
    }
    Ok(Vec2::wedge(field.rotational_a(r)? / r, x))
}

/// Line-integral gauge `Ã_n(x) = ∫₀¹ B(x_n + σ(x − x_n)) ∧ (x − x_n) σ dσ`.
///
/// The divergence and curl are evaluated from the same radial-line integral:
/// `div Ã = ∫₀¹ σ² (w ∧ ∇B)·ê dσ` and `curl Ã = ∫₀¹ [2σB + σ² w·∇B] dσ`,
/// the latter being `B(x)` up to the quadrature error of `rule`.
pub fn tilde_a<T: Real, F: MagneticField<T> + ?Sized>(
    field: &F,
    x_n: Vec2<T>,
    x: Vec2<T>,
    rule: &QuadratureRule<T>,
) -> GaugeSample<T> {
    tilde_a_offset(field, x_n, x - x_n, rule)
}

/// [`tilde_a`] at `x_n + w`, taking the offset `w` directly so that it keeps
/// full precision when `|x_n|` is large.
pub fn tilde_a_offset<T: Real, F: MagneticField<T> + ?Sized>(
    field: &F,
    x_n: Vec2<T>,
    w: Vec2<T>,
    rule: &QuadratureRule<T>,
) -> GaugeSample<T> {
    let two = T::lit(2.0);
    let mut beta = T::zero();
    let mut div = T::zero();
    let mut curl = T::zero();
    rule.for_each_node(T::zero(), T::one(), |sigma, weight| {
        let p = x_n + w.scale(sigma);
        let b = field.value(p);
        let g = field.gradient(p);
        beta += weight * b * sigma;
        div += weight * sigma * sigma * w.cross(g);
        curl += weight * (two * sigma * b + sigma * sigma * w.dot(g));
    });
    GaugeSample { a: Vec2::wedge(beta, w), div_a: div, curl_a: curl }
}

/// `Ã_n(x_n + w) − ½B(x_n) ∧ w`, the excess of the line-integral gauge over
/// the symmetric gauge of the frozen field, formed from `B − B(x_n)` so that
/// it keeps relative precision when `|B|` is large. The divergence equals
/// that of `Ã_n` and the curl is `B(x_n + w) − B(x_n)`.
pub fn tilde_a_excess<T: Real, F: MagneticField<T> + ?Sized>(
    field: &F,
    x_n: Vec2<T>,
    w: Vec2<T>,
    rule: &QuadratureRule<T>,
) -> GaugeSample<T> {
    let two = T::lit(2.0);
    let mut beta = T::zero();
    let mut div = T::zero();
    let mut curl = T::zero();
    rule.for_each_node(T::zero(), T::one(), |sigma, weight| {
        let db = field.difference(x_n, w.scale(sigma));
        let g = field.gradient(x_n + w.scale(sigma));
        beta += weight * db * sigma;
        div += weight * sigma * sigma * w.cross(g);
        curl += weight * (two * sigma * db + sigma * sigma * w.dot(g));
    });
    GaugeSample { a: Vec2::wedge(beta, w), div_a: div, curl_a: curl }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    #[test]
    fn field_value_examples() {
        assert_eq!(PowerLawField::new(1.0, 0.0).unwrap().value(p(3.0, 4.0)), 1.0);
        assert_relative_eq!(PowerLawField::new(2.0, 1.0).unwrap().value(p(3.0, 4.0)), 10.0);
        assert_relative_eq!(PowerLawField::new(1.0, 2.0).unwrap().value(p(1.0, 1.0)), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn gauge_excess_matches_difference_of_gauges() {
        let f = PowerLawField::new(1.5, 1.0).unwrap();
        let rule = QuadratureRule::<f64>::default_gauge();
        let x_n = p(2.0, -1.0);
        let w = p(0.4, 0.7);
        let full = tilde_a(&f, x_n, x_n + w, &rule);
        let sym = symmetric_a_n(f.value(x_n), x_n, x_n + w);
        let ex = tilde_a_excess(&f, x_n, w, &rule);
        assert_relative_eq!(ex.a.x, full.a.x - sym.a.x, epsilon = 1e-13);
        assert_relative_eq!(ex.a.y, full.a.y - sym.a.y, epsilon = 1e-13);
        assert_relative_eq!(ex.div_a, full.div_a, epsilon = 1e-13);
        assert_relative_eq!(ex.curl_a, f.value(x_n + w) - f.value(x_n), epsilon = 1e-12);
    }

    #[test]
    fn differences_avoid_cancellation() {
        let v = PowerLawPotential::new(-1.0, 1.2).unwrap();
        let base = p(7.7e8, 0.0);
        let w = p(3e-5, -2e-5);
        // d/dr(−r^1.2)·w₁ + O(|w|²/r)
        let exact = -1.2 * 7.7e8f64.powf(0.2) * 3e-5;
        assert_relative_eq!(v.difference(base, w), exact, max_relative = 1e-9);
        let f = PowerLawField::new(2.0, 1.0).unwrap();
        assert_relative_eq!(f.difference(p(3.0, 4.0), p(0.3, 0.4)), 1.0, max_relative = 1e-14);
        assert_eq!(PowerLawField::constant(2.0).unwrap().difference(base, w), 0.0);
        assert_relative_eq!(v.difference(p(0.0, 0.0), p(1.0, 0.0)), -1.0);
    }

    #[test]
    fn rotational_a_examples() {
        let f = PowerLawField::new(1.0, 0.0).unwrap();
        assert_relative_eq!(f.rotational_a(2.0).unwrap(), 1.0);
        assert_eq!(f.rotational_a(0.0).unwrap(), 0.0);
        assert_relative_eq!(PowerLawField::new(3.0, 1.0).unwrap().rotational_a(1.0).unwrap(), 1.0);
        assert!(f.rotational_a(-1.0).is_err());
    }

    #[test]
    fn rotational_a_matches_quadrature_definition() {
        // (1/r)∫₀ʳ u³ du = r³/4, which is 2 at r = 2.
        let f = PowerLawField::new(1.0, 2.0).unwrap();
        let rule = QuadratureRule::<f64>::gauss_legendre(8, 4).unwrap();
        let r = 2.0;
        let integral = rule.integrate(|u| f.profile(u) * u, 0.0, r).unwrap() / r;
        assert_relative_eq!(integral, 2.0, epsilon = 1e-13);
        assert_relative_eq!(f.rotational_a(r).unwrap(), integral, epsilon = 1e-13);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PowerLawField::new(0.0, 1.0).is_err());
        assert!(PowerLawField::new(1.0, -0.5).is_err());
        assert!(PowerLawPotential::new(1.0, 1.0).is_err());
        assert!(PowerLawPotential::new(-1.0, 2.5).is_err());
    }

    #[test]
    fn symmetric_gauge_examples() {
        let s = symmetric_a_n(2.0, p(0.0, 0.0), p(1.0, 0.0));
        assert_eq!(s.a, p(0.0, 1.0));
        assert_eq!((s.div_a, s.curl_a), (0.0, 2.0));
        assert_eq!(symmetric_a_n(1.0, p(5.0, 5.0), p(5.0, 5.0)).a, p(0.0, 0.0));
        assert_eq!(symmetric_a_n(4.0, p(0.0, 0.0), p(0.0, 1.0)).a, p(-2.0, 0.0));
    }

    #[test]
    fn tilde_a_examples() {
        let rule = QuadratureRule::<f64>::default_gauge();
        let constant = PowerLawField::constant(1.7).unwrap();
        let xn = p(0.3, -2.0);
        let x = p(4.1, 1.5);
        let t = tilde_a(&constant, xn, x, &rule);
        let s = symmetric_a_n(1.7, xn, x);
        assert_relative_eq!(t.a.x, s.a.x, epsilon = 1e-14);
        assert_relative_eq!(t.a.y, s.a.y, epsilon = 1e-14);

        let linear = PowerLawField::new(1.0, 1.0).unwrap();
        let at_center = tilde_a(&linear, p(10.0, 0.0), p(10.0, 0.0), &rule);
        assert_eq!(at_center.a, p(0.0, 0.0));

        // ∫₀¹ σ²·σ dσ = 1/4, rotated by the wedge.
        let quad = PowerLawField::new(1.0, 2.0).unwrap();
        let t = tilde_a(&quad, p(0.0, 0.0), p(1.0, 0.0), &rule);
        assert_relative_eq!(t.a.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(t.a.y, 0.25, epsilon = 1e-14);
        assert_relative_eq!(t.curl_a, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn potential_derivative_examples() {
        let d = PowerLawPotential::new(-1.0, 2.0).unwrap().derivatives(p(1.0, 0.0)).unwrap();
        assert_relative_eq!(d.value, -1.0);
        assert_relative_eq!(d.gradient.x, -2.0);
        assert_relative_eq!(d.gradient.y, 0.0);
        assert_relative_eq!(d.hessian_norm, 2.0);

        let d = PowerLawPotential::new(-1.0, 1.0).unwrap().derivatives(p(3.0, 4.0)).unwrap();
        assert_relative_eq!(d.value, -5.0, epsilon = 1e-14);
        assert_relative_eq!(d.gradient.x, -0.6, epsilon = 1e-14);
        assert_relative_eq!(d.gradient.y, -0.8, epsilon = 1e-14);
        assert_relative_eq!(d.hessian_norm, 0.2, epsilon = 1e-14);

        let d = PowerLawPotential::new(-2.0, 0.0).unwrap().derivatives(p(1.0, 1.0)).unwrap();
        assert_eq!((d.value, d.gradient, d.hessian_norm), (-2.0, p(0.0, 0.0), 0.0));

        assert!(PowerLawPotential::new(-1.0, 1.0).unwrap().derivatives(p(0.0, 0.0)).is_err());
        assert!(PowerLawPotential::new(-1.0, 2.0).unwrap().derivatives(p(0.0, 0.0)).is_ok());
    }
}
