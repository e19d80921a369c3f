//! Scalar abstraction for forward-mode differentiation.
//!
//! Every pointwise geometric kernel in this crate is generic over [`Scalar`],
//! so the same code evaluates on plain `f64` or on first-order jets
//! ([`Jet<f64>`], [`Jet<Jet<f64>>`], ...). Nesting jets yields exact partial
//! derivatives of arbitrary order for the closed-form fields and for whole
//! operator pipelines, without a tape.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Fourth-order central-difference combination,
/// `comb4(f(-2h), f(-h), f(h), f(2h), 1/(12h))`. Implemented for scalars
/// here and for the aggregate types in [`crate::field`].
pub trait Stencil: Copy {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self;
}

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Stencil
    + std::fmt::Debug
{
    fn from_f64(v: f64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    /// Principal (value) part, discarding derivative payload.
    fn value(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    fn recip(self) -> Self;
    fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Stencil for f64 {
    fn comb4(self, m1: f64, p1: f64, p2: f64, w: f64) -> f64 {
        (self - p2 + 8.0 * (p1 - m1)) * w
    }
}

impl<S: Scalar> Stencil for Jet<S> {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self {
        (self - p2 + (p1 - m1) * Jet::from_f64(8.0)) * Jet::from_f64(w)
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

/// First-order jet in three variables: value plus the three partials.
#[derive(Clone, Copy, Debug)]
pub struct Jet<S> {
    pub v: S,
    pub d: [S; 3],
}

impl<S: Scalar> Jet<S> {
    pub fn constant(v: S) -> Self {
        Jet {
            v,
            d: [S::zero(); 3],
        }
    }

    /// Coordinate seed: the i-th variable at base value `v`.
    pub fn variable(v: S, i: usize) -> Self {
        let mut d = [S::zero(); 3];
        d[i] = S::one();
        Jet { v, d }
    }
}

/// Seed all three coordinates of a point for one differentiation level.
pub fn seed<S: Scalar>(x: &[S; 3]) -> [Jet<S>; 3] {
    [
        Jet::variable(x[0], 0),
        Jet::variable(x[1], 1),
        Jet::variable(x[2], 2),
    ]
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1], self.d[2] + o.d[2]],
        }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet {
            v: self.v - o.v,
            d: [self.d[0] - o.d[0], self.d[1] - o.d[1], self.d[2] - o.d[2]],
        }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet {
            v: self.v * o.v,
            d: [
                self.d[0] * o.v + self.v * o.d[0],
                self.d[1] * o.v + self.v * o.d[1],
                self.d[2] * o.v + self.v * o.d[2],
            ],
        }
    }
}

impl<S: Scalar> Div for Jet<S> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            v: -self.v,
            d: [-self.d[0], -self.d[1], -self.d[2]],
        }
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    fn from_f64(v: f64) -> Self {
        Jet::constant(S::from_f64(v))
    }
    fn value(&self) -> f64 {
        self.v.value()
    }
    fn sin(self) -> Self {
        let c = self.v.cos();
        Jet {
            v: self.v.sin(),
            d: [self.d[0] * c, self.d[1] * c, self.d[2] * c],
        }
    }
    fn cos(self) -> Self {
        let ms = -self.v.sin();
        Jet {
            v: self.v.cos(),
            d: [self.d[0] * ms, self.d[1] * ms, self.d[2] * ms],
        }
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        Jet {
            v: e,
            d: [self.d[0] * e, self.d[1] * e, self.d[2] * e],
        }
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        let half = S::from_f64(0.5) * r.recip();
        Jet {
            v: r,
            d: [self.d[0] * half, self.d[1] * half, self.d[2] * half],
        }
    }
    fn recip(self) -> Self {
        let r = self.v.recip();
        let m = -(r * r);
        Jet {
            v: r,
            d: [self.d[0] * m, self.d[1] * m, self.d[2] * m],
        }
    }
}
