//! Cut-off shifted Hermite packets for a constant field `B₀` and a potential
//! that is locally linear around the packet center.
//!
//! Coordinates: the packet lives in the frame `x = Rᵀy` where the rotation
//! `R` maps `e₁` to `∇V(y_n)/|∇V(y_n)|`; in that frame the field uses the
//! Landau gauge `A = (0, B₀x₁)` and `d̃ = −i∂₁ + ∂₂ − iB₀x₁`.

use num_complex::Complex;
use rayon::prelude::*;

use super::cutoff::scaled_cutoff;
use super::{collect_columns, outer_root, refine, ResidualBreakdown};
use crate::error::{Error, Result};
use crate::fields::Potential;
use crate::geom::Vec2;
use crate::numerics::hermite::hermite_phi_all;
use crate::numerics::quadrature::QuadratureRule;
use crate::scalar::{pairwise_sum, Real};

/// Term names of [`residual_thm4`], in order.
pub const THM4_TERMS: [&str; 4] = ["localization_raising", "localization_lowering", "localization_second_order", "taylor_remainder"];

const R_MIN: f64 = 1e-3;
const R_MAX: f64 = 1e15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylPacket4<T> {
    pub n: usize,
    /// Center in physical coordinates.
    pub y_n: Vec2<T>,
    /// `(cos θ, sin θ)` of the rotation `R` with `R e₁ = ∇V(y_n)/|∇V(y_n)|`.
    pub rotation: Vec2<T>,
    /// Center in the packet frame, `Rᵀ y_n`.
    pub x_n: Vec2<T>,
    /// Gradient magnitude `|∇V(y_n)|`.
    pub e_n: T,
    /// `V(y_n) − E`.
    pub v_n: T,
    pub xi_n: T,
    pub r_n: T,
    pub b0: T,
    pub e: T,
}

impl<T: Real> WeylPacket4<T> {
    /// `R x` for a packet-frame point.
    pub fn to_physical(&self, x: Vec2<T>) -> Vec2<T> {
        let (c, s) = (self.rotation.x, self.rotation.y);
        Vec2::new(c * x.x - s * x.y, s * x.x + c * x.y)
    }

    /// `Rᵀ y` for a physical point.
    pub fn to_packet_frame(&self, y: Vec2<T>) -> Vec2<T> {
        let (c, s) = (self.rotation.x, self.rotation.y);
        Vec2::new(c * y.x + s * y.y, -s * y.x + c * y.y)
    }

    /// `E_n/(2B₀)`, the oscillator shift.
    pub fn shift(&self) -> T {
        self.e_n / (T::lit(2.0) * self.b0)
    }
}

/// `ξ = B₀x₁ + E/(2B₀)`.
pub fn landau_momentum<T: Real>(b0: T, x1: T, e_n: T) -> T {
    b0 * x1 + e_n / (T::lit(2.0) * b0)
}

/// Center on the ray where `V(y) − E + 2nB₀ + (|∇V(y)|/2B₀)² = 0`, with the
/// associated frame, momentum and radius `r_n = √(n^{1+ε}/B₀)`.
pub fn find_center_thm4<T, P>(pot: &P, n: usize, b0: T, e: T, eps: T, direction: Vec2<T>) -> Result<WeylPacket4<T>>
where
    T: Real,
    P: Potential<T> + ?Sized,
{
    if !(b0 > T::zero() && b0.is_finite()) {
        return Err(Error::Domain(format!("B0 must be > 0, got {b0}")));
    }
    if n == 0 {
        return Err(Error::Domain("packet index n must be >= 1".into()));
    }
    let d = direction.normalized().ok_or_else(|| Error::Domain("direction must be a non-zero vector".into()))?;
    let two = T::lit(2.0);
    let level = two * T::from_usize_lossy(n) * b0;
    let g = |r: T| match pot.derivatives(d.scale(r)) {
        Ok(dv) => {
            let q = dv.gradient.norm() / (two * b0);
            dv.value - e + level + q * q
        }
        Err(_) => T::nan(),
    };
    let r = outer_root(g, T::lit(R_MIN), T::lit(R_MAX), &format!("oscillator center of level {n}"))?;
    let y_n = d.scale(r);
    let dv = pot.derivatives(y_n)?;
    let e_n = dv.gradient.norm();
    let rotation = dv
        .gradient
        .normalized()
        .ok_or_else(|| Error::Regime(format!("potential gradient vanishes at the center {y_n:?}")))?;
    let mut p = WeylPacket4 {
        n,
        y_n,
        rotation,
        x_n: Vec2::zero(),
        e_n,
        v_n: dv.value - e,
        xi_n: T::zero(),
        r_n: (T::from_usize_lossy(n).powf(T::one() + eps) / b0).sqrt(),
        b0,
        e,
    };
    p.x_n = p.to_packet_frame(y_n);
    p.xi_n = landau_momentum(b0, p.x_n.x, e_n);
    Ok(p)
}

/// `ψ_{m}(x) = e^{iξx₂} B₀^{1/4} φ_m(√B₀(x₁ − a))`.
pub fn shifted_hermite_state<T: Real>(m: usize, b0: T, a: T, xi: T, x: Vec2<T>) -> Complex<T> {
    let u = b0.sqrt() * (x.x - a);
    let amp = b0.powf(T::lit(0.25)) * crate::numerics::hermite::hermite_phi(m, u);
    Complex::from_polar(T::one(), xi * x.y) * amp
}

/// Upper and lower spinor components of the cut-off packet at a point of
/// the packet frame.
pub fn hermite_packet_value<T: Real>(p: &WeylPacket4<T>, x: Vec2<T>) -> [Complex<T>; 2] {
    let c1 = scaled_cutoff(p.x_n.x, p.r_n, x.x).value;
    let c2 = scaled_cutoff(p.x_n.y, p.r_n, x.y).value;
    let zero = Complex::new(T::zero(), T::zero());
    if c1 == T::zero() || c2 == T::zero() {
        return [zero, zero];
    }
    [shifted_hermite_state(p.n, p.b0, p.x_n.x, p.xi_n, x) * (c1 * c2), zero]
}

struct Column<T> {
    x1: T,
    w: T,
    h: [T; 3],
    chi: super::cutoff::Jet<T>,
}

fn column<T: Real>(p: &WeylPacket4<T>, x1: T, w: T) -> Column<T> {
    let u = p.b0.sqrt() * (x1 - p.x_n.x);
    let all = hermite_phi_all(p.n + 1, u);
    let amp = p.b0.powf(T::lit(0.25));
    let lower = if p.n == 0 { T::zero() } else { all[p.n - 1] };
    Column { x1, w, h: [lower * amp, all[p.n] * amp, all[p.n + 1] * amp], chi: scaled_cutoff(p.x_n.x, p.r_n, x1) }
}

fn terms_at<T: Real, P: Potential<T> + ?Sized>(pot: &P, p: &WeylPacket4<T>, col: &Column<T>, x2: T) -> ([Complex<T>; 4], Complex<T>) {
    let i = Complex::new(T::zero(), T::one());
    let two = T::lit(2.0);
    let nn = T::from_usize_lossy(p.n);
    let c = p.shift();
    let [hm, h0, hp] = col.h;
    let c1 = col.chi;
    let c2 = scaled_cutoff(p.x_n.y, p.r_n, x2);
    // The common phase e^{iξx₂} is dropped: it does not change any modulus.
    let lowering = i * (-(two * nn * p.b0).sqrt() * hm + c * h0);
    let raising = i * ((two * (nn + T::one()) * p.b0).sqrt() * hp - c * h0);
    let d_chi = Complex::new(c1.value * c2.d1, -c2.value * c1.d1);
    let d_star_chi = Complex::new(-c1.value * c2.d1, -c2.value * c1.d1);
    let psi = Complex::new(h0, T::zero());
    let chi = c1.value * c2.value;
    let lap = c1.d2 * c2.value + c1.value * c2.d2;
    let w = p.to_physical(Vec2::new(col.x1 - p.x_n.x, x2 - p.x_n.y));
    let remainder = pot.difference(p.y_n, w) + (pot.value(p.y_n) - p.e - p.v_n) - p.e_n * (col.x1 - p.x_n.x);
    (
        [d_chi * raising, d_star_chi * lowering, psi * (-lap), psi * (chi * remainder)],
        psi * chi,
    )
}

/// Pointwise terms of [`residual_thm4`] at a packet-frame point.
pub fn residual_thm4_at<T: Real, P: Potential<T> + ?Sized>(pot: &P, p: &WeylPacket4<T>, x: Vec2<T>) -> ([Complex<T>; 4], Complex<T>) {
    let phase = Complex::from_polar(T::one(), p.xi_n * x.y);
    let (t, u) = terms_at(pot, p, &column(p, x.x, T::one()), x.y);
    (t.map(|v| v * phase), u * phase)
}

fn segments<T: Real>(center: T, r: T) -> [(T, T); 3] {
    let two = T::lit(2.0);
    [(center - two * r, center - r), (center - r, center + r), (center + r, center + two * r)]
}

/// Residual `(H − E)φₙ` split into the raising and lowering parts of the
/// first-order localization error, `−Δχ ψ`, and the Taylor remainder
/// `χ[V − V(y_n) − E_n(x₁ − x_{n,1})]ψ`, integrated over the support square.
pub fn residual_thm4<T, P>(pot: &P, p: &WeylPacket4<T>, quad: &QuadratureRule<T>) -> Result<ResidualBreakdown<T>>
where
    T: Real,
    P: Potential<T> + ?Sized,
{
    let sb = p.b0.sqrt();
    let osc = (T::from_usize_lossy(2 * p.n + 2)).sqrt();
    refine("residual", |level| {
        let mut cols = Vec::new();
        for (a, b) in segments(p.x_n.x, p.r_n) {
            let len_u = (b - a) * sb;
            let need = (len_u * osc / T::lit(2.0)).ceil().to_usize().unwrap_or(1);
            let rule = quad.with_panels(quad.panels().max(need) << level);
            rule.for_each_node(a, b, |x1, w| cols.push((x1, w)));
        }
        let mut rows2 = Vec::new();
        for (a, b) in segments(p.x_n.y, p.r_n) {
            quad.with_panels(quad.panels() << level).for_each_node(a, b, |x2, w| rows2.push((x2, w)));
        }
        let sums: Vec<[T; 6]> = cols
            .into_par_iter()
            .map(|(x1, w1)| {
                let col = column(p, x1, w1);
                let vals: Vec<[T; 6]> = rows2
                    .iter()
                    .map(|&(x2, w2)| {
                        let (t, u) = terms_at(pot, p, &col, x2);
                        let total = t.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
                        let mut out = [T::zero(); 6];
                        for (s, v) in out.iter_mut().zip(&t) {
                            *s = w2 * v.norm_sqr();
                        }
                        out[4] = w2 * total.norm_sqr();
                        out[5] = w2 * u.norm_sqr();
                        out
                    })
                    .collect();
                let mut out = [T::zero(); 6];
                for (c, slot) in out.iter_mut().enumerate() {
                    let v: Vec<T> = vals.iter().map(|r| r[c]).collect();
                    *slot = col.w * pairwise_sum(&v);
                }
                out
            })
            .collect();
        let s = collect_columns(&sums)?;
        Ok(ResidualBreakdown::from_squares(&THM4_TERMS, &s, 0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{ConstantPotential, LinearPotential, PowerLawPotential};
    use approx::assert_relative_eq;

    fn e1() -> Vec2<f64> {
        Vec2::new(1.0, 0.0)
    }

    #[test]
    fn center_examples() {
        let v = PowerLawPotential::new(-1.0, 1.0).unwrap();
        let p = find_center_thm4(&v, 2, 1.0, 0.0, 0.1, e1()).unwrap();
        assert_relative_eq!(p.y_n.x, 4.25, max_relative = 1e-11);
        assert_relative_eq!(p.e_n, 1.0, max_relative = 1e-12);
        assert_relative_eq!(p.v_n, -4.25, max_relative = 1e-11);
        // ∇V points to the origin, so the frame is turned by π.
        assert_relative_eq!(p.rotation.x, -1.0);
        assert_relative_eq!(p.x_n.x, -4.25, max_relative = 1e-11);
        assert_relative_eq!(p.xi_n, landau_momentum(1.0, -4.25, 1.0), max_relative = 1e-11);
        assert_relative_eq!(p.r_n, 2f64.powf(1.1).sqrt());
        assert_relative_eq!(landau_momentum(1.0, 4.25, 1.0), 4.75);
        let flat = ConstantPotential(-1.0);
        assert!(matches!(find_center_thm4(&flat, 2, 1.0, 0.0, 0.1, e1()), Err(Error::Regime(_))));
    }

    #[test]
    fn center_invariant_holds() {
        let v = PowerLawPotential::new(-1.0, 0.5).unwrap();
        for n in [10usize, 25, 40] {
            let p = find_center_thm4(&v, n, 1.0, 1.5, 0.1, Vec2::new(0.6, 0.8)).unwrap();
            let c = p.shift();
            assert_relative_eq!(p.v_n, -2.0 * n as f64 - c * c, max_relative = 1e-10);
            assert_relative_eq!(p.to_physical(p.x_n).x, p.y_n.x, max_relative = 1e-12);
            assert_relative_eq!(p.to_physical(p.x_n).y, p.y_n.y, max_relative = 1e-12);
        }
    }

    #[test]
    fn packet_support_and_modulus() {
        let v = PowerLawPotential::new(-1.0, 0.5).unwrap();
        let p = find_center_thm4(&v, 10, 1.0, 0.0, 0.1, e1()).unwrap();
        let far = p.x_n + Vec2::new(3.0 * p.r_n, 0.0);
        assert_eq!(hermite_packet_value(&p, far)[0].norm(), 0.0);
        let far = p.x_n + Vec2::new(0.0, -2.5 * p.r_n);
        assert_eq!(hermite_packet_value(&p, far)[0].norm(), 0.0);
        let base = hermite_packet_value(&p, p.x_n + Vec2::new(0.3, 0.0))[0].norm();
        for dy in [-0.9, -0.2, 0.4, 0.95] {
            let v = hermite_packet_value(&p, p.x_n + Vec2::new(0.3, dy * p.r_n))[0];
            assert_relative_eq!(v.norm(), base, max_relative = 1e-13);
            assert_eq!(hermite_packet_value(&p, p.x_n + Vec2::new(0.3, dy * p.r_n))[1].norm(), 0.0);
        }
    }

    #[test]
    fn packet_norm_is_between_r_and_4r() {
        let v = PowerLawPotential::new(-1.0, 0.5).unwrap();
        for n in [10usize, 20, 40] {
            let p = find_center_thm4(&v, n, 1.0, 0.0, 0.1, e1()).unwrap();
            let r = residual_thm4(&v, &p, &QuadratureRule::default_gauge()).unwrap();
            let m = r.packet_norm * r.packet_norm;
            assert!(m >= p.r_n && m <= 4.0 * p.r_n, "n={n} m={m} r={}", p.r_n);
        }
    }

    #[test]
    fn linear_potential_has_no_remainder() {
        let v = LinearPotential { offset: 0.0, slope: Vec2::new(-1.0, 0.0) };
        let p = find_center_thm4(&v, 6, 1.0, 0.0, 0.1, e1()).unwrap();
        let r = residual_thm4(&v, &p, &QuadratureRule::default_gauge()).unwrap();
        assert!(r.term("taylor_remainder").unwrap() < 1e-12 * r.packet_norm);
        assert!(r.ratio > 0.0 && r.satisfies_triangle(1e-9));
    }

    #[test]
    fn decomposition_matches_direct_operator() {
        // d̃*d̃ = −Δ + 2iB₀x₁∂₂ + B₀²x₁² − B₀ in the packet frame.
        let v = PowerLawPotential::new(-1.0, 0.5).unwrap();
        // E = 6 keeps the center near |y| = 3 so that the momentum stays moderate.
        let p = find_center_thm4(&v, 3, 1.3, 6.0, 0.1, Vec2::new(0.6, 0.8)).unwrap();
        let f = |x: Vec2<f64>| hermite_packet_value(&p, x)[0];
        let i = Complex::new(0.0, 1.0);
        let h = 1e-4;
        for off in [(0.3, 0.2), (1.4, -1.1), (-1.9, 0.7), (0.1, 1.3)] {
            let x = p.x_n + Vec2::new(off.0 * p.r_n / 1.5, off.1 * p.r_n / 1.5);
            let ex = Vec2::new(h, 0.0);
            let ey = Vec2::new(0.0, h);
            let lap = (f(x + ex) + f(x - ex) + f(x + ey) + f(x - ey) - f(x) * 4.0) / (h * h);
            let fy = (f(x + ey) - f(x - ey)) / (2.0 * h);
            let b = p.b0;
            let direct = -lap + fy * i * (2.0 * b * x.x) + f(x) * (b * b * x.x * x.x - b) + f(x) * (v.value(p.to_physical(x)) - p.e);
            let (t, _) = residual_thm4_at(&v, &p, x);
            let sum: Complex<f64> = t.iter().sum();
            assert!((sum - direct).norm() < 1e-5 * (1.0 + direct.norm()), "x={x:?} sum={sum} direct={direct}");
        }
    }
}
