//! Angular-momentum channels of a rotationally symmetric Pauli operator.
//!
//! In the rotational gauge the operator splits into half-line blocks `h_j`,
//! `j ∈ ℤ`, acting on `u(r) = √r f(r)`. The spin-up component carries angular
//! momentum `j` and the spin-down component `j + 1`:
//!
//! ```text
//! W(r) = (l² − ¼)/r² + A(r)² − 2m_j A(r)/r − σ₃ A′(r) + v(r),  m_j = j + ½,
//! ```
//!
//! with `l = j` (σ₃ = +1) or `l = j + 1` (σ₃ = −1). Each block is discretized
//! on the staggered grid `r_i = (i + ½)h`, `h = R/n`, with Dirichlet data at
//! `r = R` and the flux form of `−(1/r)(r f′)′` in the variable `u`. The flux
//! form keeps the borderline `−¼/r²` channels second-order accurate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{RadialField, RadialPotential};
use crate::numerics::tridiag::{default_eig_tolerance, TridiagonalSym};
use crate::scalar::Real;

/// Upper (`σ₃ = +1`) or lower (`σ₃ = −1`) spinor component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn sigma3<T: Real>(self) -> T {
        match self {
            Spin::Up => T::one(),
            Spin::Down => -T::one(),
        }
    }

    /// Angular momentum carried by this component inside channel `j`.
    pub fn angular_momentum(self, j: i64) -> i64 {
        match self {
            Spin::Up => j,
            Spin::Down => j + 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Spin::Up => "up",
            Spin::Down => "down",
        }
    }
}

/// Box size `R` and node count `n` of a staggered radial grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid<T> {
    radius: T,
    nodes: usize,
}

impl<T: Real> RadialGrid<T> {
    pub fn new(radius: T, nodes: usize) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::Domain(format!("grid radius must be > 0, got {radius}")));
        }
        if nodes < 16 {
            return Err(Error::Domain(format!("grid needs at least 16 nodes, got {nodes}")));
        }
        Ok(Self { radius, nodes })
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn step(&self) -> T {
        self.radius / T::from_usize_lossy(self.nodes)
    }

    pub fn node(&self, i: usize) -> T {
        (T::from_usize_lossy(i) + T::lit(0.5)) * self.step()
    }

    /// Same box with twice the nodes.
    pub fn refined(&self) -> Self {
        Self { radius: self.radius, nodes: self.nodes * 2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec<T> {
    pub j: i64,
    pub spin: Spin,
    pub grid: RadialGrid<T>,
}

/// Effective potential `W(r)` of channel `(j, spin)`, centrifugal term included.
pub fn effective_potential<T: Real, F, P>(field: &F, pot: &P, j: i64, spin: Spin, r: T) -> Result<T>
where
    F: RadialField<T> + ?Sized,
    P: RadialPotential<T> + ?Sized,
{
    Ok(centrifugal::<T>(spin.angular_momentum(j), r) + magnetic_part(field, j, r, spin.sigma3())? + pot.profile(r))
}

fn centrifugal<T: Real>(l: i64, r: T) -> T {
    let l = T::lit(l as f64);
    (l * l - T::lit(0.25)) / (r * r)
}

fn magnetic_part<T: Real, F: RadialField<T> + ?Sized>(field: &F, j: i64, r: T, sigma3: T) -> Result<T> {
    let a = field.rotational_a(r)?;
    let ap = field.rotational_a_prime(r)?;
    let m = T::lit(j as f64 + 0.5);
    Ok(a * a - T::lit(2.0) * m * a / r - sigma3 * ap)
}

/// Symmetric tridiagonal discretization of channel `spec`.
///
/// Diagonal: `2/h² + W(r_i) + 1/(4r_i²)` (the `−¼/r²` piece of the
/// centrifugal term is carried by the flux-form Laplacian); off-diagonal:
/// `−(i+1)/√((i+½)(i+3/2)) / h²`.
pub fn assemble_channel<T: Real, F, P>(field: &F, pot: &P, spec: &ChannelSpec<T>) -> Result<TridiagonalSym<T>>
where
    F: RadialField<T> + ?Sized,
    P: RadialPotential<T> + ?Sized,
{
    assemble_with_sigma3(field, pot, spec, spec.spin.sigma3())
}

/// As [`assemble_channel`] but with an explicit `σ₃` sign; used by the
/// validation suite to check that a flipped sign is detected.
#[doc(hidden)]
pub fn assemble_with_sigma3<T: Real, F, P>(field: &F, pot: &P, spec: &ChannelSpec<T>, sigma3: T) -> Result<TridiagonalSym<T>>
where
    F: RadialField<T> + ?Sized,
    P: RadialPotential<T> + ?Sized,
{
    let n = spec.grid.nodes();
    let h = spec.grid.step();
    let inv_h2 = (h * h).recip();
    let l = spec.spin.angular_momentum(spec.j);
    let quarter = T::lit(0.25);
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let r = spec.grid.node(i);
        let w = centrifugal::<T>(l, r) + magnetic_part(field, spec.j, r, sigma3)? + pot.profile(r);
        diag.push(T::lit(2.0) * inv_h2 + w + quarter / (r * r));
    }
    let offdiag = (0..n - 1)
        .map(|i| {
            let fi = T::from_usize_lossy(i);
            let half = T::lit(0.5);
            -(fi + T::one()) / ((fi + half) * (fi + T::lit(1.5))).sqrt() * inv_h2
        })
        .collect();
    TridiagonalSym::new(diag, offdiag)
}

/// Eigenvalues of one channel inside a window.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpectrum<T> {
    pub spec: ChannelSpec<T>,
    pub window: (T, T),
    pub eigenvalues: Vec<T>,
    /// Whether the classical turning point of each eigenvalue lies inside
    /// `0.8·R`; untrusted values feel the box wall.
    pub trusted: Vec<bool>,
    /// Whether `W(R)` exceeds the window top, i.e. the box confines the window.
    pub confining: bool,
    pub warnings: Vec<String>,
}

/// Fraction of the box inside which a turning point is considered safe.
pub const TRUST_FRACTION: f64 = 0.8;

/// Spectrum of channel `spec` in `window = [a, b)`.
pub fn channel_spectrum<T: Real, F, P>(field: &F, pot: &P, spec: ChannelSpec<T>, window: (T, T)) -> Result<ChannelSpectrum<T>>
where
    F: RadialField<T> + ?Sized,
    P: RadialPotential<T> + ?Sized,
{
    channel_spectrum_with_sigma3(field, pot, spec, window, spec.spin.sigma3())
}

#[doc(hidden)]
pub fn channel_spectrum_with_sigma3<T: Real, F, P>(
    field: &F,
    pot: &P,
    spec: ChannelSpec<T>,
    window: (T, T),
    sigma3: T,
) -> Result<ChannelSpectrum<T>>
where
    F: RadialField<T> + ?Sized,
    P: RadialPotential<T> + ?Sized,
{
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!("window must be finite with a < b, got [{a}, {b})")));
    }
    let matrix = assemble_with_sigma3(field, pot, &spec, sigma3)?;
    let tol = default_eig_tolerance(a.abs().max(b.abs()));
    let eigenvalues = matrix.eig_window(a, b, tol)?;

    let n = spec.grid.nodes();
    let h = spec.grid.step();
    let quarter = T::lit(0.25);
    // Effective potential on the nodes as seen by the discrete operator.
    let w: Vec<T> = (0..n)
        .map(|i| {
            let r = spec.grid.node(i);
            matrix.diag()[i] - T::lit(2.0) / (h * h) - quarter / (r * r)
        })
        .collect();
    let limit = T::lit(TRUST_FRACTION) * spec.grid.radius();
    let trusted = eigenvalues
        .iter()
        .map(|&lambda| match w.iter().rposition(|&wi| wi <= lambda) {
            Some(i) => spec.grid.node(i) < limit,
            None => true,
        })
        .collect();
    let confining = *w.last().expect("n >= 16") > b;

    let mut warnings = Vec::new();
    // The `−¼/r²` piece is carried by the flux-form Laplacian, so resolution
    // is judged on the remaining diagonal.
    let w_min = (0..n).fold(T::infinity(), |m, i| m.min(matrix.diag()[i] - T::lit(2.0) / (h * h)));
    if b > w_min {
        let per_wavelength = T::TAU() / (h * (b - w_min).sqrt());
        if per_wavelength < T::lit(8.0) {
            warnings.push(format!(
                "channel j={} spin={}: only {:.1} nodes per local wavelength at energy {}",
                spec.j,
                spec.spin.label(),
                per_wavelength.to_f64_lossy(),
                b
            ));
        }
    }
    if !confining {
        warnings.push(format!(
            "channel j={} spin={}: W(R) = {} does not exceed the window top; levels are box-dependent",
            spec.j,
            spec.spin.label(),
            w.last().copied().unwrap_or_else(T::nan)
        ));
    }
    Ok(ChannelSpectrum { spec, window, eigenvalues, trusted, confining, warnings })
}

/// How the radial grid of each channel is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridPolicy<T> {
    /// The same box and node count for every channel.
    Fixed(RadialGrid<T>),
    /// Per-channel box: the smallest `R` with `W(R) ≥ top + margin` (and at
    /// least `1.3×` the outermost point with `W ≤ top`); `fallback_radius`
    /// when no such `R` is found below `max_radius`. Nodes:
    /// `max(min_nodes, nodes_per_unit·R)`.
    Adaptive { margin: T, fallback_radius: T, max_radius: T, min_nodes: usize, nodes_per_unit: usize },
}

impl<T: Real> Default for GridPolicy<T> {
    fn default() -> Self {
        GridPolicy::Adaptive {
            margin: T::lit(10.0),
            fallback_radius: T::lit(60.0),
            max_radius: T::lit(400.0),
            min_nodes: 4000,
            nodes_per_unit: 200,
        }
    }
}

impl<T: Real> GridPolicy<T> {
    pub fn grid_for<F, P>(&self, field: &F, pot: &P, j: i64, spin: Spin, top: T) -> Result<RadialGrid<T>>
    where
        F: RadialField<T> + ?Sized,
        P: RadialPotential<T> + ?Sized,
    {
        match *self {
            GridPolicy::Fixed(grid) => Ok(grid),
            GridPolicy::Adaptive { margin, fallback_radius, max_radius, min_nodes, nodes_per_unit } => {
                let radius = confining_radius(field, pot, j, spin, top, margin, max_radius)?.unwrap_or(fallback_radius);
                let nodes = min_nodes.max((radius.to_f64_lossy() * nodes_per_unit as f64).ceil() as usize);
                RadialGrid::new(radius, nodes)
            }
        }
    }
}

/// Smallest radius on a geometric scan where the effective potential clears
/// `top + margin` and keeps rising; `None` if the channel does not confine
/// below `max_radius`.
fn confining_radius<T: Real, F, P>(field: &F, pot: &P, j: i64, spin: Spin, top: T, margin: T, max_radius: T) -> Result<Option<T>>
where
    F: RadialField<T> + ?Sized,
    P: RadialPotential<T> + ?Sized,
{
    let growth = T::lit(1.02);
    let mut r = T::lit(0.05);
    let mut last_below = T::zero();
    let mut found = None;
    while r <= max_radius {
        let w = effective_potential(field, pot, j, spin, r)?;
        if w <= top {
            last_below = r;
            found = None;
        } else if found.is_none() && w >= top + margin {
            let further = effective_potential(field, pot, j, spin, r * T::lit(1.5))?;
            if further >= w {
                found = Some(r);
            }
        }
        r *= growth;
    }
    Ok(found.map(|r| r.max(T::lit(1.3) * last_below)))
}

/// Channel spectra over a range of `j` and both spins, merged.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport<T> {
    pub window: (T, T),
    pub per_channel: Vec<ChannelSpectrum<T>>,
    pub merged: Vec<T>,
    pub max_gap: T,
    pub min_abs: T,
    pub count: usize,
    /// Whether every computed channel confines the window.
    pub all_confining: bool,
}

impl<T: Real> SpectrumReport<T> {
    pub fn warnings(&self) -> impl Iterator<Item = &String> {
        self.per_channel.iter().flat_map(|c| c.warnings.iter())
    }

    /// Number of eigenvalues flagged as box-affected.
    pub fn untrusted_count(&self) -> usize {
        self.per_channel.iter().map(|c| c.trusted.iter().filter(|t| !**t).count()).sum()
    }
}

/// Computes every channel `j ∈ [j_min, j_max]`, both spins, in parallel and
/// merges them in `(j, spin)` order before sorting.
pub fn aggregate_spectrum<T: Real, F, P>(
    field: &F,
    pot: &P,
    j_min: i64,
    j_max: i64,
    window: (T, T),
    policy: &GridPolicy<T>,
) -> Result<SpectrumReport<T>>
where
    F: RadialField<T> + ?Sized,
    P: RadialPotential<T> + ?Sized,
{
    if j_min > j_max {
        return Err(Error::Domain(format!("channel range needs j_min <= j_max, got [{j_min}, {j_max}]")));
    }
    let jobs: Vec<(i64, Spin)> = (j_min..=j_max).flat_map(|j| [(j, Spin::Up), (j, Spin::Down)]).collect();
    let per_channel = jobs
        .par_iter()
        .map(|&(j, spin)| {
            let grid = policy.grid_for(field, pot, j, spin, window.1)?;
            channel_spectrum(field, pot, ChannelSpec { j, spin, grid }, window)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut merged: Vec<T> = per_channel.iter().flat_map(|c| c.eigenvalues.iter().copied()).collect();
    merged.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    let (max_gap, min_abs, count) = gap_metrics(&merged, window);
    let all_confining = per_channel.iter().all(|c| c.confining);
    Ok(SpectrumReport { window, per_channel, merged, max_gap, min_abs, count, all_confining })
}

/// `(max_gap, min_abs, count)` of a sorted list inside `window`, the window
/// edges acting as virtual endpoints. An empty list gives the window length,
/// `+∞` and 0.
pub fn gap_metrics<T: Real>(sorted: &[T], window: (T, T)) -> (T, T, usize) {
    let (a, b) = window;
    let inside: Vec<T> = sorted.iter().copied().filter(|&x| x >= a && x < b).collect();
    let mut prev = a;
    let mut max_gap = T::zero();
    for &x in inside.iter().chain(std::iter::once(&b)) {
        max_gap = max_gap.max(x - prev);
        prev = x;
    }
    let min_abs = inside.iter().fold(T::infinity(), |m, &x| m.min(x.abs()));
    (max_gap, min_abs, inside.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PowerLawField, PowerLawPotential, ZeroPotential};
    use approx::assert_abs_diff_eq;

    fn landau() -> PowerLawField<f64> {
        PowerLawField::constant(1.0).unwrap()
    }

    #[test]
    fn effective_potential_by_hand() {
        // B = 1, A = r/2, A′ = ½, j = 0 spin-down (l = 1) at r = 2:
        // 0.75/4 + 1 − 2·½·1/2 + ½ = 1.1875.
        let w = effective_potential(&landau(), &ZeroPotential, 0, Spin::Down, 2.0).unwrap();
        assert_abs_diff_eq!(w, 1.1875, epsilon = 1e-15);
        let w = effective_potential(&landau(), &ZeroPotential, 0, Spin::Up, 2.0).unwrap();
        assert_abs_diff_eq!(w, -0.0625 + 1.0 - 0.5 - 0.5, epsilon = 1e-15);
    }

    #[test]
    fn potential_enters_additively() {
        let grid = RadialGrid::new(10.0, 64).unwrap();
        let spec = ChannelSpec { j: 2, spin: Spin::Up, grid };
        let bare = assemble_channel(&landau(), &ZeroPotential, &spec).unwrap();
        let pot = PowerLawPotential::new(-1.0, 1.0).unwrap();
        let shifted = assemble_channel(&landau(), &pot, &spec).unwrap();
        for i in 0..64 {
            assert_abs_diff_eq!(shifted.diag()[i] - bare.diag()[i], -grid.node(i), epsilon = 1e-9);
        }
        assert_eq!(shifted.offdiag(), bare.offdiag());
    }

    #[test]
    fn offdiagonal_is_flux_form() {
        let grid = RadialGrid::new(4.0, 16).unwrap();
        let t = assemble_channel(&landau(), &ZeroPotential, &ChannelSpec { j: 0, spin: Spin::Up, grid }).unwrap();
        let h2 = grid.step().powi(2);
        assert_abs_diff_eq!(t.offdiag()[0] * h2, -1.0 / (0.75f64).sqrt(), epsilon = 1e-15);
        // Far from the origin the stencil approaches −1/h².
        assert_abs_diff_eq!(t.offdiag()[14] * h2, -1.0, epsilon = 1e-3);
    }

    #[test]
    fn landau_levels_in_one_channel() {
        let grid = RadialGrid::new(20.0, 4000).unwrap();
        let up = channel_spectrum(&landau(), &ZeroPotential, ChannelSpec { j: 0, spin: Spin::Up, grid }, (-0.5, 9.0)).unwrap();
        assert_eq!(up.eigenvalues.len(), 5);
        for (k, &e) in up.eigenvalues.iter().enumerate() {
            assert_abs_diff_eq!(e, 2.0 * k as f64, epsilon = 1e-3);
        }
        let down = channel_spectrum(&landau(), &ZeroPotential, ChannelSpec { j: 0, spin: Spin::Down, grid }, (-0.5, 9.0)).unwrap();
        assert_eq!(down.eigenvalues.len(), 4);
        assert!(down.eigenvalues.iter().all(|&e| e > 2.0 - 1e-3));
        assert!(up.trusted.iter().all(|&t| t));
    }

    #[test]
    fn empty_window_below_potential_floor() {
        let grid = RadialGrid::new(20.0, 400).unwrap();
        let s = channel_spectrum(&landau(), &ZeroPotential, ChannelSpec { j: 3, spin: Spin::Down, grid }, (-10.0, -1.0)).unwrap();
        assert!(s.eigenvalues.is_empty());
    }

    #[test]
    fn gap_metric_examples() {
        assert_eq!(gap_metrics(&[1.0, 2.0, 4.0], (0.0, 5.0)), (2.0, 1.0, 3));
        let (g, m, c) = gap_metrics::<f64>(&[], (0.0, 1.0));
        assert_eq!((g, c), (1.0, 0));
        assert!(m.is_infinite());
        assert_eq!(gap_metrics(&[-0.1, 0.05], (-1.0, 1.0)).1, 0.05);
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let grid = RadialGrid::new(20.0, 16).unwrap();
        let s = channel_spectrum(&landau(), &ZeroPotential, ChannelSpec { j: 0, spin: Spin::Up, grid }, (-0.5, 9.0)).unwrap();
        assert!(!s.warnings.is_empty());
        // l = 0 channels are not flagged just for the −¼/r² term at the first node.
        let grid = RadialGrid::new(20.0, 4000).unwrap();
        let s = channel_spectrum(&landau(), &ZeroPotential, ChannelSpec { j: 0, spin: Spin::Up, grid }, (-0.5, 9.0)).unwrap();
        assert!(s.warnings.is_empty(), "{:?}", s.warnings);
    }

    #[test]
    fn adaptive_grid_confines_window() {
        let policy = GridPolicy::<f64>::default();
        let g = policy.grid_for(&landau(), &ZeroPotential, 0, Spin::Up, 9.0).unwrap();
        let w = effective_potential(&landau(), &ZeroPotential, 0, Spin::Up, g.radius()).unwrap();
        assert!(w >= 19.0);
        assert!(g.nodes() >= 4000);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(RadialGrid::new(10.0, 8).is_err());
        assert!(RadialGrid::new(-1.0, 100).is_err());
        let p = GridPolicy::<f64>::default();
        assert!(aggregate_spectrum(&landau(), &ZeroPotential, 3, 2, (0.0, 1.0), &p).is_err());
    }
}
