//! Composite Gauss–Legendre quadrature on intervals and polar annuli.

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::scalar::{pairwise_sum, Real};

/// A composite Gauss–Legendre rule.
///
/// `nodes` and `weights` describe the rule on the unit interval `[0, 1]`
/// (weights sum to 1); `panels` equal sub-intervals are used after the affine
/// map to `[a, b]`. With `m` nodes per panel the rule integrates polynomials
/// of degree `2m − 1` exactly on each panel.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    panels: usize,
}

impl<T: Real> QuadratureRule<T> {
    /// `points`-node Gauss–Legendre rule repeated over `panels` panels.
    pub fn gauss_legendre(points: usize, panels: usize) -> Result<Self> {
        if points == 0 || panels == 0 {
            return Err(Error::Domain("quadrature needs >= 1 point and >= 1 panel".into()));
        }
        let (nodes, weights) = gauss_legendre_unit(points);
        Ok(Self { nodes, weights, panels })
    }

    /// 16 points × 4 panels: the rule used for gauge line integrals.
    pub fn default_gauge() -> Self {
        Self::gauss_legendre(16, 4).expect("static rule")
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn points(&self) -> usize {
        self.nodes.len()
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Highest polynomial degree integrated exactly on each panel.
    pub fn exactness_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// Same node set repeated over `panels` panels.
    pub fn with_panels(&self, panels: usize) -> Self {
        Self { nodes: self.nodes.clone(), weights: self.weights.clone(), panels: panels.max(1) }
    }

    /// Calls `visit(x, w)` for every mapped node/weight pair on `[a, b]`, panel
    /// by panel from left to right.
    pub fn for_each_node(&self, a: T, b: T, mut visit: impl FnMut(T, T)) {
        let width = (b - a) / T::from_usize_lossy(self.panels);
        for p in 0..self.panels {
            let left = a + width * T::from_usize_lossy(p);
            for (&u, &w) in self.nodes.iter().zip(&self.weights) {
                visit(left + width * u, width * w);
            }
        }
    }

    /// All mapped `(node, weight)` pairs on `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(self.nodes.len() * self.panels);
        self.for_each_node(a, b, |x, w| out.push((x, w)));
        out
    }

    /// Composite estimate of `∫ₐᵇ f`. Non-finite samples are an error.
    pub fn integrate(&self, f: impl Fn(T) -> T, a: T, b: T) -> Result<T> {
        integrate_1d(f, a, b, self)
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule mapped to `[0, 1]`.
fn gauss_legendre_unit<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = n as f64;
    let half = T::lit(0.5);
    // Roots are symmetric; Newton on P_n from the Tricomi-type initial guess.
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut x = T::lit(guess);
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1]
        nodes[i] = half * (T::one() - x);
        nodes[n - 1 - i] = half * (T::one() + x);
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Composite Gauss–Legendre estimate of `∫ₐᵇ f(x) dx`.
pub fn integrate_1d<T: Real>(f: impl Fn(T) -> T, a: T, b: T, rule: &QuadratureRule<T>) -> Result<T> {
    if !(a <= b) {
        return Err(Error::Domain(format!("integration bounds must satisfy a <= b, got [{a}, {b}]")));
    }
    let mut terms = Vec::with_capacity(rule.points() * rule.panels());
    let mut bad = None;
    rule.for_each_node(a, b, |x, w| {
        let y = f(x);
        if !y.is_finite() && bad.is_none() {
            bad = Some(x);
        }
        terms.push(w * y);
    });
    if let Some(x) = bad {
        return Err(Error::NonFinite(format!("integrand is not finite at x = {x}")));
    }
    Ok(pairwise_sum(&terms))
}

/// Polar tensor-product quadrature of `f` over the annulus
/// `r_in ≤ |x − center| ≤ r_out`: Gauss–Legendre in the radius (with the
/// Jacobian `ρ`) times the trapezoid rule in angle, which is exact for
/// trigonometric polynomials of degree below `angular_nodes`.
pub fn integrate_annulus<T: Real>(
    f: impl Fn(Vec2<T>) -> T,
    center: Vec2<T>,
    r_in: T,
    r_out: T,
    rule: &QuadratureRule<T>,
    angular_nodes: usize,
) -> T {
    let angular = angular_nodes.max(1);
    let dtheta = T::TAU() / T::from_usize_lossy(angular);
    let dirs: Vec<Vec2<T>> = (0..angular)
        .map(|k| {
            let th = dtheta * T::from_usize_lossy(k);
            Vec2::new(th.cos(), th.sin())
        })
        .collect();
    let mut rings = Vec::with_capacity(rule.points() * rule.panels());
    rule.for_each_node(r_in, r_out, |rho, w| {
        let ring: Vec<T> = dirs.iter().map(|&d| f(center + d.scale(rho))).collect();
        rings.push(w * rho * dtheta * pairwise_sum(&ring));
    });
    pairwise_sum(&rings)
}
