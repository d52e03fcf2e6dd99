//! Trial functions and residual norms `‖(H − E)φₙ‖ / ‖φₙ‖` for Weyl-sequence
//! certification.
//!
//! Two packet families are provided: cut-off Landau states of the local
//! constant field in the symmetric gauge ([`WeylPacket3`], used with
//! growing levels or with a fixed level), and cut-off shifted Hermite states
//! in the Landau gauge of a constant field with a locally linear potential
//! ([`WeylPacket4`]). Gauge factors are never materialized; every residual
//! is evaluated in the frame where they drop out of the norms.

pub mod cutoff;
pub mod hermite_packet;
pub mod landau;
pub mod operators;
pub mod symmetric;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::numerics::quadrature::QuadratureRule;
use crate::scalar::{pairwise_sum, Real};

pub use cutoff::{cutoff_sup_norms, radial_cutoff, scaled_cutoff, smooth_cutoff, Jet, RadialCutoff};
pub use hermite_packet::{
    find_center_thm4, hermite_packet_value, landau_momentum, residual_thm4, residual_thm4_at, WeylPacket4,
};
pub use landau::{landau_psi, LandauSample, LandauState};
pub use symmetric::{
    find_center_thm2, find_center_thm3, residual_thm2, residual_thm2_with, residual_thm3, CenterSchedule,
    WeylPacket3,
};

/// Relative change of the ratio below which a quadrature refinement is
/// accepted.
pub const REFINE_TOLERANCE: f64 = 1e-6;
/// Maximum number of panel doublings.
pub const MAX_REFINEMENTS: usize = 4;

/// Norms of the individual terms of a residual decomposition and of their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualBreakdown<T> {
    pub term_norms: Vec<(&'static str, T)>,
    pub total_norm: T,
    pub packet_norm: T,
    pub ratio: T,
    /// Panel doublings performed before the ratio settled.
    pub refinements: usize,
}

impl<T: Real> ResidualBreakdown<T> {
    fn from_squares(names: &[&'static str], sq: &[T], refinements: usize) -> Self {
        let m = names.len();
        let term_norms = names.iter().zip(sq).map(|(n, v)| (*n, v.max(T::zero()).sqrt())).collect();
        let total_norm = sq[m].max(T::zero()).sqrt();
        let packet_norm = sq[m + 1].max(T::zero()).sqrt();
        Self { term_norms, total_norm, packet_norm, ratio: total_norm / packet_norm, refinements }
    }

    pub fn term(&self, name: &str) -> Option<T> {
        self.term_norms.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    /// `total_norm ≤ Σ term_norms` up to a relative slack.
    pub fn satisfies_triangle(&self, slack: T) -> bool {
        let sum = self.term_norms.iter().fold(T::zero(), |acc, (_, v)| acc + *v);
        self.total_norm <= sum * (T::one() + slack) + slack * self.packet_norm
    }
}

/// Runs `eval(level)` for `level = 0, 1, …` (each level doubling the
/// resolution) until two consecutive ratios agree to [`REFINE_TOLERANCE`].
pub(crate) fn refine<T: Real>(
    what: &str,
    mut eval: impl FnMut(usize) -> Result<ResidualBreakdown<T>>,
) -> Result<ResidualBreakdown<T>> {
    let mut prev = eval(0)?;
    let mut history = vec![prev.ratio.to_f64_lossy()];
    for level in 1..=MAX_REFINEMENTS {
        let mut next = eval(level)?;
        history.push(next.ratio.to_f64_lossy());
        let change = ((next.ratio - prev.ratio) / next.ratio).abs();
        if change < T::lit(REFINE_TOLERANCE) || next.ratio == prev.ratio {
            next.refinements = level;
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!(
        "{what}: quadrature ratio did not settle to {REFINE_TOLERANCE:e} after {MAX_REFINEMENTS} refinements; ratios {history:?}"
    )))
}

/// Componentwise polar quadrature of a vector of integrands over an annulus
/// around the origin; `f` receives the offset from the packet center.
pub(crate) fn annulus_sums<T: Real, const M: usize>(
    f: impl Fn(Vec2<T>) -> [T; M] + Sync,
    r_in: T,
    r_out: T,
    rule: &QuadratureRule<T>,
    angular_nodes: usize,
) -> Result<[T; M]> {
    let dtheta = T::TAU() / T::from_usize_lossy(angular_nodes);
    let dirs: Vec<Vec2<T>> = (0..angular_nodes)
        .map(|k| {
            let th = dtheta * T::from_usize_lossy(k);
            Vec2::new(th.cos(), th.sin())
        })
        .collect();
    let rings: Vec<[T; M]> = rule
        .mapped(r_in, r_out)
        .into_par_iter()
        .map(|(rho, w)| {
            let samples: Vec<[T; M]> = dirs.iter().map(|&d| f(d.scale(rho))).collect();
            let mut out = [T::zero(); M];
            for (c, slot) in out.iter_mut().enumerate() {
                let col: Vec<T> = samples.iter().map(|s| s[c]).collect();
                *slot = w * rho * dtheta * pairwise_sum(&col);
            }
            out
        })
        .collect();
    collect_columns(&rings)
}

pub(crate) fn collect_columns<T: Real, const M: usize>(rows: &[[T; M]]) -> Result<[T; M]> {
    let mut out = [T::zero(); M];
    for (c, slot) in out.iter_mut().enumerate() {
        let col: Vec<T> = rows.iter().map(|s| s[c]).collect();
        *slot = pairwise_sum(&col);
        if !slot.is_finite() {
            return Err(Error::NonFinite(format!("residual quadrature produced a non-finite sum in column {c}")));
        }
    }
    Ok(out)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Domain("slope fit needs two or more paired samples".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > T::zero())) {
        return Err(Error::Domain("slope fit needs positive samples".into()));
    }
    let lx: Vec<T> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<T> = y.iter().map(|v| v.ln()).collect();
    let n = T::from_usize_lossy(x.len());
    let mx = pairwise_sum(&lx) / n;
    let my = pairwise_sum(&ly) / n;
    let sxy: Vec<T> = lx.iter().zip(&ly).map(|(a, b)| (*a - mx) * (*b - my)).collect();
    let sxx: Vec<T> = lx.iter().map(|a| (*a - mx) * (*a - mx)).collect();
    let den = pairwise_sum(&sxx);
    if den == T::zero() {
        return Err(Error::Domain("slope fit needs distinct abscissae".into()));
    }
    Ok(pairwise_sum(&sxy) / den)
}

/// Smallest index `i` such that the disks `|x − cⱼ| ≤ 2rⱼ` are pairwise
/// disjoint for consecutive `j ≥ i`, or `None` if the last pair overlaps.
pub fn first_disjoint_index<T: Real>(centers: &[Vec2<T>], radii: &[T]) -> Option<usize> {
    let two = T::lit(2.0);
    let overlap = |j: usize| (centers[j + 1] - centers[j]).norm() <= two * (radii[j] + radii[j + 1]);
    let n = centers.len().min(radii.len());
    if n < 2 {
        return Some(0);
    }
    (0..n - 1).rev().find(|&j| overlap(j)).map_or(Some(0), |j| if j + 2 < n { Some(j + 1) } else { None })
}

/// Outermost sign change from positive to non-positive of `g(r)` on the
/// geometric grid `r₀·2ⁱ ≤ r_max`, refined by bisection until the bracket
/// cannot shrink further (well below `1e-12` relative).
pub(crate) fn outer_root<T: Real>(g: impl Fn(T) -> T, r0: T, r_max: T, what: &str) -> Result<T> {
    let two = T::lit(2.0);
    let mut grid = vec![r0];
    while *grid.last().unwrap() < r_max {
        let next = *grid.last().unwrap() * two;
        grid.push(next);
    }
    let vals: Vec<T> = grid.iter().map(|&r| g(r)).collect();
    if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("{what}: not finite at r = {}", grid[i])));
    }
    let last_pos = vals.iter().rposition(|&v| v > T::zero());
    let Some(i) = last_pos else {
        return Err(Error::Regime(format!("{what}: no sign change (non-positive on [{r0}, {r_max}])")));
    };
    if i + 1 == grid.len() {
        return Err(Error::Regime(format!("{what}: no sign change (still positive at r = {r_max})")));
    }
    let (mut lo, mut hi) = (grid[i], grid[i + 1]);
    if vals[i + 1] == T::zero() {
        return Ok(hi);
    }
    for _ in 0..400 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == T::zero() {
            return Ok(mid);
        }
        if gm > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if g(lo).abs() < g(hi).abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn slope_of_power_law() {
        let x: Vec<f64> = (1..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-1.5)).collect();
        assert_relative_eq!(loglog_slope(&x, &y).unwrap(), -1.5, epsilon = 1e-12);
        assert!(loglog_slope(&x[..1], &y[..1]).is_err());
    }

    #[test]
    fn disjointness_index() {
        let c: Vec<Vec2<f64>> = [0.0, 1.0, 2.0, 10.0, 20.0].iter().map(|&x| Vec2::new(x, 0.0)).collect();
        let r = vec![1.0; 5];
        assert_eq!(first_disjoint_index(&c, &r), Some(2));
        let far: Vec<Vec2<f64>> = [0.0, 10.0, 20.0].iter().map(|&x| Vec2::new(x, 0.0)).collect();
        assert_eq!(first_disjoint_index(&far, &[1.0; 3]), Some(0));
        let close: Vec<Vec2<f64>> = [0.0, 10.0, 11.0].iter().map(|&x| Vec2::new(x, 0.0)).collect();
        assert_eq!(first_disjoint_index(&close, &[1.0; 3]), None);
    }

    #[test]
    fn outer_root_bisection() {
        let r = outer_root(|r: f64| 4.0 * r - r.powf(1.2), 1e-3, 1e15, "t").unwrap();
        assert_relative_eq!(r, 1024.0, max_relative = 1e-11);
        assert!(matches!(outer_root(|r: f64| -r, 1e-3, 1e6, "t"), Err(Error::Regime(_))));
        assert!(matches!(outer_root(|r: f64| r, 1e-3, 1e6, "t"), Err(Error::Regime(_))));
    }
}
