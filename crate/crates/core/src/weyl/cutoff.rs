use crate::geom::Vec2;
use crate::scalar::Real;

/// Value and first two derivatives of a scalar profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

/// C² plateau profile: 1 on `u ≤ 1`, 0 on `u ≥ 2`, and on `(1, 2)` the
/// quintic `1 − (10w³ − 15w⁴ + 6w⁵)`, `w = u − 1`.
pub fn smooth_cutoff<T: Real>(u: T) -> Jet<T> {
    let one = T::one();
    let two = T::lit(2.0);
    if u <= one {
        return Jet { value: one, d1: T::zero(), d2: T::zero() };
    }
    if u >= two {
        return Jet { value: T::zero(), d1: T::zero(), d2: T::zero() };
    }
    let w = u - one;
    let w2 = w * w;
    let value = one - w2 * w * (T::lit(10.0) - T::lit(15.0) * w + T::lit(6.0) * w2);
    let d1 = -T::lit(30.0) * w2 * (one - w) * (one - w);
    let d2 = -T::lit(60.0) * w * (one - w) * (one - two * w);
    Jet { value, d1, d2 }
}

/// `sup |χ′| = 15/8` and `sup |χ″| = 10/√3` of [`smooth_cutoff`].
pub fn cutoff_sup_norms<T: Real>() -> (T, T) {
    (T::lit(1.875), T::lit(10.0) / T::lit(3.0).sqrt())
}

/// Radial cutoff `χ(|x − c|/r)` with gradient and Laplacian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialCutoff<T> {
    pub value: T,
    pub gradient: Vec2<T>,
    pub laplacian: T,
}

pub fn radial_cutoff<T: Real>(center: Vec2<T>, radius: T, x: Vec2<T>) -> RadialCutoff<T> {
    radial_cutoff_offset(x - center, radius)
}

/// [`radial_cutoff`] in terms of the offset `w = x − c`.
pub fn radial_cutoff_offset<T: Real>(w: Vec2<T>, radius: T) -> RadialCutoff<T> {
    let rho = w.norm();
    let jet = smooth_cutoff(rho / radius);
    if jet.d1 == T::zero() && jet.d2 == T::zero() {
        return RadialCutoff { value: jet.value, gradient: Vec2::zero(), laplacian: T::zero() };
    }
    let gradient = w.scale(jet.d1 / (radius * rho));
    let laplacian = jet.d2 / (radius * radius) + jet.d1 / (radius * rho);
    RadialCutoff { value: jet.value, gradient, laplacian }
}

/// One-dimensional cutoff `χ((x − c)/r)` and its derivatives in `x`.
pub fn scaled_cutoff<T: Real>(center: T, radius: T, x: T) -> Jet<T> {
    let jet = smooth_cutoff((x - center).abs() / radius);
    let sign = if x >= center { T::one() } else { -T::one() };
    Jet { value: jet.value, d1: sign * jet.d1 / radius, d2: jet.d2 / (radius * radius) }
}
