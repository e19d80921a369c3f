//! Closed-form tensor fields on chart coordinates.
//!
//! Fields are small expression trees evaluated generically over any
//! [`Scalar`], so one definition serves plain evaluation, nested-jet
//! differentiation, and finite-difference stencils alike. Components are
//! always stored against the chart's oriented orthonormal coframe unless a
//! function explicitly says "coordinate components" (the metric-field path
//! used by the Cotton operator does).

use crate::scalar::{seed, Jet, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A smooth closed-form function of chart coordinates.
#[derive(Clone, Debug)]
pub enum Expr {
    Const(f64),
    Coord(usize),
    /// Sparse polynomial: sum of `coef * x0^p0 x1^p1 x2^p2`.
    Poly(Vec<(f64, [u8; 3])>),
    Sum(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Scale(f64, Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Recip(Box<Expr>),
}

impl Expr {
    pub fn eval<S: Scalar>(&self, x: &[S; 3]) -> S {
        match self {
            Expr::Const(c) => S::from_f64(*c),
            Expr::Coord(i) => x[*i],
            Expr::Poly(terms) => {
                let mut acc = S::zero();
                for (c, p) in terms {
                    let mut t = S::from_f64(*c);
                    for (i, &pw) in p.iter().enumerate() {
                        if pw > 0 {
                            t = t * x[i].powi(pw as u32);
                        }
                    }
                    acc = acc + t;
                }
                acc
            }
            Expr::Sum(a, b) => a.eval(x) + b.eval(x),
            Expr::Prod(a, b) => a.eval(x) * b.eval(x),
            Expr::Scale(s, a) => S::from_f64(*s) * a.eval(x),
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Recip(a) => a.eval(x).recip(),
        }
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn add(self, o: Expr) -> Expr {
        Expr::Sum(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Expr) -> Expr {
        Expr::Prod(Box::new(self), Box::new(o))
    }

    pub fn scale(self, s: f64) -> Expr {
        Expr::Scale(s, Box::new(self))
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn recip(self) -> Expr {
        Expr::Recip(Box::new(self))
    }

    /// Random dense polynomial of total degree <= `deg`, coefficients in
    /// `(-scale, scale)`.
    pub fn random_poly(rng: &mut ChaCha8Rng, deg: u8, scale: f64) -> Expr {
        let mut terms = Vec::new();
        for p0 in 0..=deg {
            for p1 in 0..=(deg - p0) {
                for p2 in 0..=(deg - p0 - p1) {
                    terms.push((rng.gen_range(-scale..scale), [p0, p1, p2]));
                }
            }
        }
        Expr::Poly(terms)
    }

    /// Gaussian bump `exp(-c |x - x0|^2)`, effectively compactly supported.
    pub fn gauss_bump(center: [f64; 3], c: f64) -> Expr {
        let mut quad = Vec::new();
        let mut norm0 = 0.0;
        for (i, &ci) in center.iter().enumerate() {
            let mut p2 = [0u8; 3];
            p2[i] = 2;
            quad.push((-c, p2));
            let mut p1 = [0u8; 3];
            p1[i] = 1;
            quad.push((2.0 * c * ci, p1));
            norm0 -= c * ci * ci;
        }
        quad.push((norm0, [0, 0, 0]));
        Expr::Exp(Box::new(Expr::Poly(quad)))
    }
}

/// Covector field by orthonormal-coframe components.
#[derive(Clone, Debug)]
pub struct VField(pub [Expr; 3]);

/// `T*M (x) T*M`-valued field by orthonormal components, first index the
/// form slot.
#[derive(Clone, Debug)]
pub struct MField(pub [[Expr; 3]; 3]);

impl VField {
    pub fn zero() -> Self {
        VField([Expr::zero(), Expr::zero(), Expr::zero()])
    }

    pub fn constant(v: [f64; 3]) -> Self {
        VField([Expr::Const(v[0]), Expr::Const(v[1]), Expr::Const(v[2])])
    }

    pub fn random_poly(rng: &mut ChaCha8Rng, deg: u8, scale: f64) -> Self {
        VField(std::array::from_fn(|_| Expr::random_poly(rng, deg, scale)))
    }

    pub fn eval<S: Scalar>(&self, x: &[S; 3]) -> crate::algebra::Vec3<S> {
        crate::algebra::Vec3(std::array::from_fn(|i| self.0[i].eval(x)))
    }
}

impl MField {
    pub fn zero() -> Self {
        MField(std::array::from_fn(|_| {
            std::array::from_fn(|_| Expr::zero())
        }))
    }

    pub fn constant(m: crate::algebra::M3) -> Self {
        MField(std::array::from_fn(|i| {
            std::array::from_fn(|j| Expr::Const(m.0[i][j]))
        }))
    }

    pub fn random_poly(rng: &mut ChaCha8Rng, deg: u8, scale: f64) -> Self {
        MField(std::array::from_fn(|_| {
            std::array::from_fn(|_| Expr::random_poly(rng, deg, scale))
        }))
    }

    pub fn eval<S: Scalar>(&self, x: &[S; 3]) -> crate::algebra::Mat3<S> {
        crate::algebra::Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j].eval(x))
        }))
    }
}

/// Differentiation backend for jets of fields and of whole operator
/// pipelines. `Ad` propagates nested jets through the closed forms and is
/// exact to machine precision; `Fd` uses fourth-order central differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    Ad,
    Fd { h: f64 },
}

impl Backend {
    pub fn fd_default() -> Backend {
        Backend::Fd { h: 1e-3 }
    }

    /// Gradient of a scalar expression, generic over the ambient scalar so
    /// it can itself be differentiated again.
    pub fn grad_expr<S: Scalar>(&self, f: &Expr, x: &[S; 3]) -> [S; 3] {
        match *self {
            Backend::Ad => {
                let j = f.eval(&seed(x));
                j.d
            }
            Backend::Fd { h } => fd_grad(|y| f.eval(y), x, h),
        }
    }
}

/// Fourth-order central difference gradient of a closure, usable at any
/// scalar level. Shifts only the value part of the coordinates.
pub fn fd_grad<S: Scalar, F: Fn(&[S; 3]) -> S>(f: F, x: &[S; 3], h: f64) -> [S; 3] {
    std::array::from_fn(|i| {
        let shift = |c: f64| {
            let mut y = *x;
            y[i] = y[i] + S::from_f64(c * h);
            f(&y)
        };
        (shift(-2.0) - shift(2.0) + (shift(1.0) - shift(-1.0)) * S::from_f64(8.0))
            * S::from_f64(1.0 / (12.0 * h))
    })
}

/// First-order jet of an operator-valued quantity: the macro evaluates the
/// expression once per stencil point (Fd) or once on jet-seeded coordinates
/// (Ad) and returns the three coordinate derivatives. `$x` is the base
/// point, `$xx` the bound coordinate name, and the expression must be
/// generic in the scalar type of `$xx`.
#[macro_export]
macro_rules! op_grad {
    ($be:expr, $x:expr, $xx:ident => $e:expr) => {{
        match $be {
            $crate::field::Backend::Ad => {
                let xs = $crate::scalar::seed($x);
                let $xx = &xs;
                let out = $e;
                $crate::field::Unjet::split(out).1
            }
            $crate::field::Backend::Fd { h } => {
                let mut at = |i: usize, c: f64| {
                    let mut y = *$x;
                    $crate::field::shift_coord(&mut y, i, c * h);
                    let $xx = &y;
                    $e
                };
                let w = 1.0 / (12.0 * h);
                ::std::array::from_fn(|i| {
                    $crate::scalar::Stencil::comb4(
                        at(i, -2.0),
                        at(i, -1.0),
                        at(i, 1.0),
                        at(i, 2.0),
                        w,
                    )
                })
            }
        }
    }};
}

/// Coordinate shift helper for the finite-difference branch of [`op_grad`].
pub fn shift_coord<S: Scalar>(y: &mut [S; 3], i: usize, d: f64) {
    y[i] = y[i] + S::from_f64(d);
}

pub use crate::scalar::Stencil;

/// Splitting of jet-valued aggregates into value and directional parts.
pub trait Unjet: Copy {
    type Plain: Copy;
    fn split(self) -> (Self::Plain, [Self::Plain; 3]);
}

impl<S: Scalar> Unjet for Jet<S> {
    type Plain = S;
    fn split(self) -> (S, [S; 3]) {
        (self.v, self.d)
    }
}

impl<S: Scalar> Unjet for crate::algebra::Vec3<Jet<S>> {
    type Plain = crate::algebra::Vec3<S>;
    fn split(self) -> (Self::Plain, [Self::Plain; 3]) {
        let v = crate::algebra::Vec3(std::array::from_fn(|i| self.0[i].v));
        let d =
            std::array::from_fn(|k| crate::algebra::Vec3(std::array::from_fn(|i| self.0[i].d[k])));
        (v, d)
    }
}

impl<S: Scalar> Stencil for crate::algebra::Vec3<S> {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self {
        crate::algebra::Vec3(std::array::from_fn(|i| {
            crate::field::scalar_comb4(self.0[i], m1.0[i], p1.0[i], p2.0[i], w)
        }))
    }
}

impl<S: Scalar> Unjet for crate::algebra::Mat3<Jet<S>> {
    type Plain = crate::algebra::Mat3<S>;
    fn split(self) -> (Self::Plain, [Self::Plain; 3]) {
        let v =
            crate::algebra::Mat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j].v)));
        let d = std::array::from_fn(|k| {
            crate::algebra::Mat3(std::array::from_fn(|i| {
                std::array::from_fn(|j| self.0[i][j].d[k])
            }))
        });
        (v, d)
    }
}

impl<S: Scalar> Stencil for crate::algebra::Mat3<S> {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self {
        crate::algebra::Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| scalar_comb4(self.0[i][j], m1.0[i][j], p1.0[i][j], p2.0[i][j], w))
        }))
    }
}

pub(crate) fn scalar_comb4<S: Scalar>(m2: S, m1: S, p1: S, p2: S, w: f64) -> S {
    (m2 - p2 + (p1 - m1) * S::from_f64(8.0)) * S::from_f64(w)
}

impl<T: Unjet> Unjet for [T; 3] {
    type Plain = [T::Plain; 3];
    fn split(self) -> (Self::Plain, [Self::Plain; 3]) {
        let parts: [(T::Plain, [T::Plain; 3]); 3] = std::array::from_fn(|i| self[i].split());
        let v = std::array::from_fn(|i| parts[i].0);
        let d = std::array::from_fn(|k| std::array::from_fn(|i| parts[i].1[k]));
        (v, d)
    }
}

impl<T: Stencil> Stencil for [T; 3] {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self {
        std::array::from_fn(|i| self[i].comb4(m1[i], p1[i], p2[i], w))
    }
}

impl<A: Unjet, B: Unjet> Unjet for (A, B) {
    type Plain = (A::Plain, B::Plain);
    fn split(self) -> (Self::Plain, [Self::Plain; 3]) {
        let (av, ad) = self.0.split();
        let (bv, bd) = self.1.split();
        ((av, bv), std::array::from_fn(|k| (ad[k], bd[k])))
    }
}

impl<A: Stencil, B: Stencil> Stencil for (A, B) {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self {
        (
            self.0.comb4(m1.0, p1.0, p2.0, w),
            self.1.comb4(m1.1, p1.1, p2.1, w),
        )
    }
}

impl<A: Unjet, B: Unjet, C: Unjet> Unjet for (A, B, C) {
    type Plain = (A::Plain, B::Plain, C::Plain);
    fn split(self) -> (Self::Plain, [Self::Plain; 3]) {
        let (av, ad) = self.0.split();
        let (bv, bd) = self.1.split();
        let (cv, cd) = self.2.split();
        ((av, bv, cv), std::array::from_fn(|k| (ad[k], bd[k], cd[k])))
    }
}

impl<A: Stencil, B: Stencil, C: Stencil> Stencil for (A, B, C) {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self {
        (
            self.0.comb4(m1.0, p1.0, p2.0, w),
            self.1.comb4(m1.1, p1.1, p2.1, w),
            self.2.comb4(m1.2, p1.2, p2.2, w),
        )
    }
}

impl<A: Unjet, B: Unjet, C: Unjet, D: Unjet> Unjet for (A, B, C, D) {
    type Plain = (A::Plain, B::Plain, C::Plain, D::Plain);
    fn split(self) -> (Self::Plain, [Self::Plain; 3]) {
        let (av, ad) = self.0.split();
        let (bv, bd) = self.1.split();
        let (cv, cd) = self.2.split();
        let (dv, dd) = self.3.split();
        (
            (av, bv, cv, dv),
            std::array::from_fn(|k| (ad[k], bd[k], cd[k], dd[k])),
        )
    }
}

impl<A: Stencil, B: Stencil, C: Stencil, D: Stencil> Stencil for (A, B, C, D) {
    fn comb4(self, m1: Self, p1: Self, p2: Self, w: f64) -> Self {
        (
            self.0.comb4(m1.0, p1.0, p2.0, w),
            self.1.comb4(m1.1, p1.1, p2.1, w),
            self.2.comb4(m1.2, p1.2, p2.2, w),
            self.3.comb4(m1.3, p1.3, p2.3, w),
        )
    }
}
