//! Cut-off Landau packets centered on a ray, with the residual split into
//! the eigenvalue mismatch, localization error, gauge mismatch and field
//! variation terms.

use num_complex::Complex;

use super::cutoff::radial_cutoff_offset;
use super::landau::LandauState;
use super::{annulus_sums, outer_root, refine, ResidualBreakdown};
use crate::error::{Error, Result};
use crate::fields::{tilde_a_excess, MagneticField, Potential};
use crate::geom::Vec2;
use crate::numerics::quadrature::QuadratureRule;
use crate::scalar::Real;

/// Term names of [`residual_thm3`], in order.
pub const THM3_TERMS: [&str; 6] =
    ["level_mismatch", "localization", "gauge_linear", "gauge_quadratic", "gauge_divergence", "field_variation"];

const R_MIN: f64 = 1e-3;
const R_MAX: f64 = 1e15;

/// Cut-off Landau packet `χ((x − x_n)/r_n) ψ_{k_n}(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylPacket3<T> {
    pub n: usize,
    pub k_n: usize,
    pub x_n: Vec2<T>,
    pub b_n: T,
    pub v_n: T,
    pub r_n: T,
    pub e: T,
}

impl<T: Real> WeylPacket3<T> {
    pub fn new(n: usize, k_n: usize, x_n: Vec2<T>, b_n: T, v_n: T, r_n: T, e: T) -> Result<Self> {
        if !(b_n > T::zero() && b_n.is_finite()) {
            return Err(Error::Domain(format!("packet field B_n must be > 0, got {b_n}")));
        }
        if !(r_n > T::zero() && r_n.is_finite()) {
            return Err(Error::Domain(format!("packet radius r_n must be > 0, got {r_n}")));
        }
        Ok(Self { n, k_n, x_n, b_n, v_n, r_n, e })
    }

    /// Growing-level packet: `k_n = n`, center on the ray where
    /// `2nB + V − E = 0`, and `r_n = √(2n^{1+ε}/B_n)`.
    pub fn growing_level<F, P>(field: &F, pot: &P, n: usize, eps: T, e: T, direction: Vec2<T>) -> Result<Self>
    where
        F: MagneticField<T> + ?Sized,
        P: Potential<T> + ?Sized,
    {
        if n == 0 {
            return Err(Error::Domain("packet index n must be >= 1".into()));
        }
        let x_n = find_center_thm3(field, pot, n, e, direction)?;
        let b_n = field.value(x_n);
        let nn = T::from_usize_lossy(n);
        let r_n = (T::lit(2.0) * nn.powf(T::one() + eps) / b_n).sqrt();
        Self::new(n, n, x_n, b_n, pot.value(x_n), r_n, e)
    }

    /// Fixed-level packet: `k_n = k`, center from `schedule`, and
    /// `r_n = B_n^{−(2−ε)/4}`.
    #[allow(clippy::too_many_arguments)]
    pub fn fixed_level<F, P>(
        field: &F,
        pot: &P,
        k: usize,
        eps: T,
        n: usize,
        e: T,
        direction: Vec2<T>,
        schedule: CenterSchedule<T>,
    ) -> Result<Self>
    where
        F: MagneticField<T> + ?Sized,
        P: Potential<T> + ?Sized,
    {
        let hint = schedule.radius(n);
        let x_n = find_center_thm2(field, pot, k, e, direction, hint)?;
        let b_n = field.value(x_n);
        let r_n = b_n.powf(-(T::lit(2.0) - eps) / T::lit(4.0));
        Self::new(n, k, x_n, b_n, pot.value(x_n), r_n, e)
    }
}

fn unit<T: Real>(direction: Vec2<T>) -> Result<Vec2<T>> {
    direction.normalized().ok_or_else(|| Error::Domain("direction must be a non-zero vector".into()))
}

/// Point `x_n = r·d` on the ray with `2nB(x_n) + V(x_n) − E = 0`.
pub fn find_center_thm3<T, F, P>(field: &F, pot: &P, n: usize, e: T, direction: Vec2<T>) -> Result<Vec2<T>>
where
    T: Real,
    F: MagneticField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    let d = unit(direction)?;
    let two_n = T::lit(2.0) * T::from_usize_lossy(n);
    let g = |r: T| {
        let x = d.scale(r);
        two_n * field.value(x) + pot.value(x) - e
    };
    let r = outer_root(g, T::lit(R_MIN), T::lit(R_MAX), &format!("center of level {n}"))?;
    Ok(d.scale(r))
}

/// Radius of the `n`-th fixed-level packet center, `scale·n^power`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterSchedule<T> {
    pub scale: T,
    pub power: T,
}

impl<T: Real> CenterSchedule<T> {
    pub fn radius(&self, n: usize) -> T {
        self.scale * T::from_usize_lossy(n).powf(self.power)
    }
}

impl<T: Real> Default for CenterSchedule<T> {
    fn default() -> Self {
        Self { scale: T::one(), power: T::lit(3.0) }
    }
}

/// Center for a fixed level `k`. If `2kB + V − E` vanishes at the hinted
/// radius (to `1e-12` relative) the hint is kept, since the resonance then
/// holds along the ray and any point of it is admissible; otherwise the
/// outermost zero beyond the hint is located.
pub fn find_center_thm2<T, F, P>(field: &F, pot: &P, k: usize, e: T, direction: Vec2<T>, hint: T) -> Result<Vec2<T>>
where
    T: Real,
    F: MagneticField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    let d = unit(direction)?;
    if !(hint > T::zero() && hint.is_finite()) {
        return Err(Error::Domain(format!("center hint must be > 0, got {hint}")));
    }
    let two_k = T::lit(2.0) * T::from_usize_lossy(k);
    let g = |r: T| {
        let x = d.scale(r);
        two_k * field.value(x) + pot.value(x) - e
    };
    let x = d.scale(hint);
    let scale = (two_k * field.value(x)).abs() + (pot.value(x) - e).abs();
    if g(hint).abs() <= T::lit(1e-12) * scale {
        return Ok(x);
    }
    let r = outer_root(g, hint, T::lit(R_MAX).max(hint * T::lit(2.0)), &format!("resonance of level {k}"))
        .or_else(|_| outer_root(|r| -g(r), hint, T::lit(R_MAX).max(hint * T::lit(2.0)), "resonance"))
        .map_err(|_| Error::Regime(format!("2·{k}·B + V − E has no zero on the ray beyond r = {hint}")))?;
    Ok(d.scale(r))
}

/// Residual of the packet for the upper spinor component, split into
/// `χ(2kB_n + V − E)ψ`, the localization error `−Δχψ − 2i∇χ·(−i∇ − A_n)ψ`,
/// and with `D = Ã_n − A_n` the gauge terms `−2D·(−i∇ − A_n)(χψ)`,
/// `|D|²χψ`, `i(∇·D)χψ`, and `−(B − B_n)χψ`. Their sum is
/// `(H_{Ã_n} + V − E)(χψ)`.
pub fn residual_thm3<T, F, P>(field: &F, pot: &P, packet: &WeylPacket3<T>, quad: &QuadratureRule<T>) -> Result<ResidualBreakdown<T>>
where
    T: Real,
    F: MagneticField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    let state = LandauState::new(packet.k_n, packet.b_n, packet.x_n)?;
    let gauge_rule = QuadratureRule::default_gauge();
    let base_panels = quad.panels().max((packet.b_n.sqrt() * packet.r_n).ceil().to_usize().unwrap_or(1)).max(2);
    refine("residual", |level| {
        let panels = base_panels << level;
        let angular = 32usize << level;
        let rule = quad.with_panels(panels);
        let integrand = |w: Vec2<T>| residual_terms(field, pot, packet, &state, &gauge_rule, w);
        let inner = annulus_sums(integrand, T::zero(), packet.r_n, &rule, angular)?;
        let outer = annulus_sums(integrand, packet.r_n, packet.r_n * T::lit(2.0), &rule, angular)?;
        let sums: Vec<T> = inner.iter().zip(&outer).map(|(a, b)| *a + *b).collect();
        Ok(ResidualBreakdown::from_squares(&THM3_TERMS, &sums, 0))
    })
}

/// Pointwise terms of [`residual_thm3`] (complex values, in order) at the
/// point `x_n + w`.
pub fn residual_terms_at<T, F, P>(
    field: &F,
    pot: &P,
    packet: &WeylPacket3<T>,
    state: &LandauState<T>,
    gauge_rule: &QuadratureRule<T>,
    w: Vec2<T>,
) -> ([Complex<T>; 6], Complex<T>)
where
    T: Real,
    F: MagneticField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    let i = Complex::new(T::zero(), T::one());
    let ls = state.sample_offset(w);
    let psi = ls.value;
    let [p1, p2] = ls.covariant_gradient;
    let cut = radial_cutoff_offset(w, packet.r_n);
    let chi = cut.value;
    let u = psi * chi;
    let pu1 = p1 * chi - i * psi * cut.gradient.x;
    let pu2 = p2 * chi - i * psi * cut.gradient.y;
    let b_center = field.value(packet.x_n);
    let gt = tilde_a_excess(field, packet.x_n, w, gauge_rule);
    let dg = gt.a + Vec2::wedge(T::lit(0.5) * (b_center - packet.b_n), w);
    let two = T::lit(2.0);
    let k2b = two * T::from_usize_lossy(packet.k_n) * packet.b_n;
    let offset = k2b + pot.value(packet.x_n) - packet.e;
    let level = u * (offset + pot.difference(packet.x_n, w));
    let loc = -psi * cut.laplacian - (p1 * cut.gradient.x + p2 * cut.gradient.y) * i * two;
    let lin = -(pu1 * dg.x + pu2 * dg.y) * two;
    let quad = u * dg.norm_sq();
    let div = i * u * gt.div_a;
    let fv = -u * (field.difference(packet.x_n, w) + b_center - packet.b_n);
    ([level, loc, lin, quad, div, fv], u)
}

fn residual_terms<T, F, P>(
    field: &F,
    pot: &P,
    packet: &WeylPacket3<T>,
    state: &LandauState<T>,
    gauge_rule: &QuadratureRule<T>,
    w: Vec2<T>,
) -> [T; 8]
where
    T: Real,
    F: MagneticField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    let (terms, u) = residual_terms_at(field, pot, packet, state, gauge_rule, w);
    let total: Complex<T> = terms.iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b);
    let mut out = [T::zero(); 8];
    for (slot, t) in out.iter_mut().zip(&terms) {
        *slot = t.norm_sqr();
    }
    out[6] = total.norm_sqr();
    out[7] = u.norm_sqr();
    out
}

/// Fixed-level residual with the default center schedule and `E = 0`.
pub fn residual_thm2<T, F, P>(field: &F, pot: &P, k: usize, eps: T, n: usize, direction: Vec2<T>) -> Result<ResidualBreakdown<T>>
where
    T: Real,
    F: MagneticField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    residual_thm2_with(field, pot, k, eps, n, T::zero(), direction, CenterSchedule::default(), &QuadratureRule::default_gauge())
        .map(|(_, r)| r)
}

/// Fixed-level residual with explicit target, schedule and quadrature.
#[allow(clippy::too_many_arguments)]
pub fn residual_thm2_with<T, F, P>(
    field: &F,
    pot: &P,
    k: usize,
    eps: T,
    n: usize,
    e: T,
    direction: Vec2<T>,
    schedule: CenterSchedule<T>,
    quad: &QuadratureRule<T>,
) -> Result<(WeylPacket3<T>, ResidualBreakdown<T>)>
where
    T: Real,
    F: MagneticField<T> + ?Sized,
    P: Potential<T> + ?Sized,
{
    let packet = WeylPacket3::fixed_level(field, pot, k, eps, n, e, direction, schedule)?;
    let r = residual_thm3(field, pot, &packet, quad)?;
    Ok((packet, r))
}
