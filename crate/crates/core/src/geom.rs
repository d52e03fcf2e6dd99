use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

/// A point or vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Vec2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn from_f64(x: f64, y: f64) -> Self {
        Self::new(T::lit(x), T::lit(y))
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// `a ∧ v = a·(−v_y, v_x)`: scalar field strength times the rotated vector.
    pub fn wedge(a: T, v: Self) -> Self {
        Self::new(-a * v.y, a * v.x)
    }

    /// Planar cross product `self_x·other_y − self_y·other_x`.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::zero()).then(|| self.scale(n.recip()))
    }
}

impl<T: Real> Add for Vec2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Real> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Real> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Real> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}
