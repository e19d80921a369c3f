//! Coordinate charts with closed-form geometry, and the covariant calculus
//! on them.
//!
//! Every supported chart carries a diagonal metric `g = diag(lambda_i^2)`:
//! Euclidean space, the Poincare ball and upper half-space models of
//! hyperbolic 3-space, the two circle products `S^1 x H^2` / `S^1 x T^2`,
//! and the flat 3-torus. Tensor components are stored against the oriented
//! orthonormal coframe `e^i = lambda_i dx^i`, which keeps all frame algebra
//! in [`crate::algebra`] and makes the connection coefficients closed-form.
//!
//! Differentiation goes through a [`Backend`]: exact nested jets or
//! fourth-order central differences, chosen per call.

use crate::algebra::{eps, Mat3, Vec3};
use crate::field::{Backend, Expr, MField, VField};
use crate::op_grad;
use crate::scalar::Scalar;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("point {0:?} outside the admissible domain of chart {1:?}")]
    OutsideDomain([f64; 3], ChartKind),
    #[error("unknown chart name `{0}`")]
    UnknownChart(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartKind {
    Euclidean,
    /// Poincare ball, sectional curvature -1.
    Ball,
    /// Upper half-space, sectional curvature -1.
    HalfSpace,
    /// S^1 x (hyperbolic disk), product metric; t is the first coordinate.
    ProductCircleHyperbolic,
    /// S^1 x (flat 2-torus), product metric.
    ProductCircleFlat,
    /// Flat 3-torus, side 2 pi.
    Torus3,
}

impl ChartKind {
    pub fn parse(name: &str) -> Result<Self, ChartError> {
        Ok(match name {
            "euclidean" => ChartKind::Euclidean,
            "ball" => ChartKind::Ball,
            "half-space" | "halfspace" => ChartKind::HalfSpace,
            "s1xh2" => ChartKind::ProductCircleHyperbolic,
            "s1xt2" => ChartKind::ProductCircleFlat,
            "t3" => ChartKind::Torus3,
            other => return Err(ChartError::UnknownChart(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChartKind::Euclidean => "euclidean",
            ChartKind::Ball => "ball",
            ChartKind::HalfSpace => "half-space",
            ChartKind::ProductCircleHyperbolic => "s1xh2",
            ChartKind::ProductCircleFlat => "s1xt2",
            ChartKind::Torus3 => "t3",
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, ChartKind::Ball | ChartKind::HalfSpace)
    }

    pub fn is_flat(&self) -> bool {
        matches!(
            self,
            ChartKind::Euclidean | ChartKind::ProductCircleFlat | ChartKind::Torus3
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Chart {
    pub kind: ChartKind,
}

impl Chart {
    pub fn new(kind: ChartKind) -> Self {
        Chart { kind }
    }

    /// Conformal factors of the diagonal metric `g = diag(lambda_i^2)`.
    pub fn lambda<S: Scalar>(&self, x: &[S; 3]) -> [S; 3] {
        match self.kind {
            ChartKind::Euclidean | ChartKind::ProductCircleFlat | ChartKind::Torus3 => {
                [S::one(), S::one(), S::one()]
            }
            ChartKind::Ball => {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let l = S::from_f64(2.0) * (S::one() - r2).recip();
                [l, l, l]
            }
            ChartKind::HalfSpace => {
                let l = x[2].recip();
                [l, l, l]
            }
            ChartKind::ProductCircleHyperbolic => {
                let r2 = x[1] * x[1] + x[2] * x[2];
                let l = S::from_f64(2.0) * (S::one() - r2).recip();
                [S::one(), l, l]
            }
        }
    }

    /// `dlambda[i][k] = d lambda_i / d x^k`, from exact jets of the closed
    /// forms.
    pub fn dlambda<S: Scalar>(&self, x: &[S; 3]) -> [[S; 3]; 3] {
        let xs = crate::scalar::seed(x);
        let lj = self.lambda(&xs);
        std::array::from_fn(|i| lj[i].d)
    }

    /// Orthonormal connection coefficients `w[i][j][k] = <nabla_{e_i} e_j, e_k>`,
    /// antisymmetric in (j,k).
    pub fn omega<S: Scalar>(&self, x: &[S; 3]) -> [[[S; 3]; 3]; 3] {
        let l = self.lambda(x);
        let dl = self.dlambda(x);
        // L_ik = (d_k lambda_i) / (lambda_i lambda_k)
        let lmat: [[S; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|k| dl[i][k] * (l[i] * l[k]).recip()));
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| {
                    if j == k {
                        S::zero()
                    } else {
                        let mut acc = S::zero();
                        if i == j {
                            acc = acc - lmat[j][k];
                        }
                        if i == k {
                            acc = acc + lmat[k][j];
                        }
                        acc
                    }
                })
            })
        })
    }

    /// Coordinate Christoffel symbols `G[k][i][j]` of the diagonal metric.
    pub fn christoffel<S: Scalar>(&self, x: &[S; 3]) -> [[[S; 3]; 3]; 3] {
        let l = self.lambda(x);
        let dl = self.dlambda(x);
        std::array::from_fn(|k| {
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    if i == j && j == k {
                        dl[k][k] * l[k].recip()
                    } else if k == i && i != j {
                        dl[k][j] * l[k].recip()
                    } else if k == j && i != j {
                        dl[k][i] * l[k].recip()
                    } else if i == j && i != k {
                        -(l[i] * dl[i][k]) * (l[k] * l[k]).recip()
                    } else {
                        S::zero()
                    }
                })
            })
        })
    }

    /// Metric matrix in coordinate components.
    pub fn metric<S: Scalar>(&self, x: &[S; 3]) -> Mat3<S> {
        let l = self.lambda(x);
        Mat3::diag(l[0] * l[0], l[1] * l[1], l[2] * l[2])
    }

    /// Riemann curvature under the `Omega^2 (x) Lambda^2 -> T*M (x) T*M`
    /// identification, orthonormal components. The normalization is pinned
    /// so that hyperbolic charts give the metric itself (the identity in an
    /// orthonormal frame).
    pub fn riemann_matrix<S: Scalar>(&self) -> Mat3<S> {
        match self.kind {
            ChartKind::Ball | ChartKind::HalfSpace => Mat3::identity(),
            ChartKind::ProductCircleHyperbolic => {
                Mat3::diag(S::one(), S::zero(), S::zero())
            }
            _ => Mat3::zero(),
        }
    }

    /// Same tensor in coordinate components (both indices lowered by the
    /// conformal coframe): equals the coordinate metric matrix on the
    /// hyperbolic charts.
    pub fn riemann_matrix_coord(&self, x: &[f64; 3]) -> Mat3<f64> {
        let l = self.lambda(x);
        let m: Mat3<f64> = self.riemann_matrix();
        let mut out = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = m.0[i][j] * l[i] * l[j];
            }
        }
        out
    }

    pub fn scalar_curvature(&self) -> f64 {
        match self.kind {
            ChartKind::Ball | ChartKind::HalfSpace => -6.0,
            ChartKind::ProductCircleHyperbolic => -2.0,
            _ => 0.0,
        }
    }

    /// Ricci tensor, orthonormal components (constant per chart).
    pub fn ricci(&self) -> Mat3<f64> {
        match self.kind {
            ChartKind::Ball | ChartKind::HalfSpace => Mat3::identity().scale(-2.0),
            ChartKind::ProductCircleHyperbolic => Mat3::diag(0.0, -1.0, -1.0),
            _ => Mat3::zero(),
        }
    }

    /// Schouten tensor `P = Ric - (scal/4) g`, orthonormal components.
    pub fn schouten(&self) -> Mat3<f64> {
        self.ricci() - Mat3::identity().scale(self.scalar_curvature() / 4.0)
    }

    pub fn contains(&self, x: &[f64; 3]) -> bool {
        match self.kind {
            ChartKind::Ball => x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < 1.0,
            ChartKind::HalfSpace => x[2] > 0.0,
            ChartKind::ProductCircleHyperbolic => x[1] * x[1] + x[2] * x[2] < 1.0,
            _ => true,
        }
    }

    /// Sample a point in a compact subdomain with margin 0.1 from any chart
    /// boundary.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        match self.kind {
            ChartKind::Euclidean => std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
            ChartKind::Ball => loop {
                let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.9..0.9));
                if x.iter().map(|c| c * c).sum::<f64>() < 0.81 {
                    break x;
                }
            },
            ChartKind::HalfSpace => [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.3..1.5),
            ],
            ChartKind::ProductCircleHyperbolic => loop {
                let y1: f64 = rng.gen_range(-0.9..0.9);
                let y2: f64 = rng.gen_range(-0.9..0.9);
                if y1 * y1 + y2 * y2 < 0.81 {
                    break [rng.gen_range(0.0..std::f64::consts::TAU), y1, y2];
                }
            },
            ChartKind::ProductCircleFlat | ChartKind::Torus3 => {
                std::array::from_fn(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            }
        }
    }
}

/// A `T*M`-valued 2-form at a point: `pairs[p] = B(e_i, e_j)` for the pair
/// order `(0,1), (0,2), (1,2)`.
pub type TwoFormV<S> = [Vec3<S>; 3];

pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Hodge star on the form factor: `M_kl = sum_{i<j} eps_kij B(e_i,e_j)_l`.
pub fn mat_of_two_form<S: Scalar>(b: &TwoFormV<S>) -> Mat3<S> {
    let mut m = Mat3::zero();
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        for k in 0..3 {
            let e = eps(k, i, j);
            if e != 0.0 {
                for l in 0..3 {
                    m.0[k][l] = m.0[k][l] + S::from_f64(e) * b[p].0[l];
                }
            }
        }
    }
    m
}

/// Frame derivative of a scalar: `(df)_i = lambda_i^{-1} d_i f`, the
/// exterior derivative in orthonormal components.
pub fn frame_grad<S: Scalar>(ch: &Chart, be: Backend, f: &Expr, x: &[S; 3]) -> Vec3<S> {
    let l = ch.lambda(x);
    let d = be.grad_expr(f, x);
    Vec3(std::array::from_fn(|i| d[i] * l[i].recip()))
}

/// Covariant derivative of a covector field, `N_ij = (nabla_{e_i} s)_j`.
pub fn lc_vec<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> Mat3<S> {
    let l = ch.lambda(x);
    let w = ch.omega(x);
    let s = v.eval(x);
    let grads: [[S; 3]; 3] = std::array::from_fn(|j| be.grad_expr(&v.0[j], x));
    let mut n = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = grads[j][i] * l[i].recip();
            for k in 0..3 {
                acc = acc + s.0[k] * w[i][k][j];
            }
            n.0[i][j] = acc;
        }
    }
    n
}

/// Covariant derivative of a `T*M (x) T*M` field:
/// `out[i] = nabla_{e_i} a` as a matrix.
pub fn lc_mat<S: Scalar>(ch: &Chart, be: Backend, a: &MField, x: &[S; 3]) -> [Mat3<S>; 3] {
    let l = ch.lambda(x);
    let w = ch.omega(x);
    let av = a.eval(x);
    let grads: [[[S; 3]; 3]; 3] =
        std::array::from_fn(|j| std::array::from_fn(|k| be.grad_expr(&a.0[j][k], x)));
    std::array::from_fn(|i| {
        let mut m = Mat3::zero();
        for j in 0..3 {
            for k in 0..3 {
                let mut acc = grads[j][k][i] * l[i].recip();
                for t in 0..3 {
                    acc = acc + av.0[t][k] * w[i][t][j] + av.0[j][t] * w[i][t][k];
                }
                m.0[j][k] = acc;
            }
        }
        m
    })
}

/// Connection correction for value-level covariant derivatives of computed
/// quantities: given coordinate partials `dq` of orthonormal covector
/// components `q`, return `(nabla_{e_i} q)_j`.
pub fn covariant_from_partials_vec<S: Scalar>(
    ch: &Chart,
    x: &[S; 3],
    q: Vec3<S>,
    dq: &[Vec3<S>; 3],
) -> Mat3<S> {
    let l = ch.lambda(x);
    let w = ch.omega(x);
    let mut n = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = dq[i].0[j] * l[i].recip();
            for k in 0..3 {
                acc = acc + q.0[k] * w[i][k][j];
            }
            n.0[i][j] = acc;
        }
    }
    n
}

/// Same for matrix-valued quantities.
pub fn covariant_from_partials_mat<S: Scalar>(
    ch: &Chart,
    x: &[S; 3],
    q: Mat3<S>,
    dq: &[Mat3<S>; 3],
) -> [Mat3<S>; 3] {
    let l = ch.lambda(x);
    let w = ch.omega(x);
    std::array::from_fn(|i| {
        let mut m = Mat3::zero();
        for j in 0..3 {
            for k in 0..3 {
                let mut acc = dq[i].0[j][k] * l[i].recip();
                for t in 0..3 {
                    acc = acc + q.0[t][k] * w[i][t][j] + q.0[j][t] * w[i][t][k];
                }
                m.0[j][k] = acc;
            }
        }
        m
    })
}

/// Codifferential of a covector field, `d* s = - sum_i (nabla_i s)_i`
/// (the sign convention `d* = -*_3 d *_3` on one-forms).
pub fn codiff_vec<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> S {
    let n = lc_vec(ch, be, v, x);
    -(n.0[0][0] + n.0[1][1] + n.0[2][2])
}

/// Curl `*_3 d s` of a covector field in orthonormal components.
pub fn curl_vec<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> Vec3<S> {
    let n = lc_vec(ch, be, v, x);
    curl_of_nabla(n)
}

pub fn curl_of_nabla<S: Scalar>(n: Mat3<S>) -> Vec3<S> {
    let mut c = Vec3::zero();
    for k in 0..3 {
        let mut acc = S::zero();
        for i in 0..3 {
            for j in 0..3 {
                let e = eps(k, i, j);
                if e != 0.0 {
                    acc = acc + S::from_f64(e) * n.0[i][j];
                }
            }
        }
        c.0[k] = acc;
    }
    c
}

/// Exterior derivative of a covector field as a 2-form (pair components).
pub fn d_vec_two_form<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> [S; 3] {
    let n = lc_vec(ch, be, v, x);
    std::array::from_fn(|p| {
        let (i, j) = PAIRS[p];
        n.0[i][j] - n.0[j][i]
    })
}

/// Twisted exterior derivative `d_LC a` of a `T*M`-valued one-form.
pub fn dlc_mat<S: Scalar>(ch: &Chart, be: Backend, a: &MField, x: &[S; 3]) -> TwoFormV<S> {
    let na = lc_mat(ch, be, a, x);
    std::array::from_fn(|p| {
        let (i, j) = PAIRS[p];
        na[i].row(j) - na[j].row(i)
    })
}

/// `*_3 d_LC a` as a matrix (form star on the 2-form factor).
pub fn star_dlc_mat<S: Scalar>(ch: &Chart, be: Backend, a: &MField, x: &[S; 3]) -> Mat3<S> {
    mat_of_two_form(&dlc_mat(ch, be, a, x))
}

/// Codifferential of a `T*M`-valued one-form: `(d*_LC a)_l = -sum_i (nabla_i a)_il`.
pub fn codiff_mat<S: Scalar>(ch: &Chart, be: Backend, a: &MField, x: &[S; 3]) -> Vec3<S> {
    let na = lc_mat(ch, be, a, x);
    let mut v = Vec3::zero();
    for l in 0..3 {
        let mut acc = S::zero();
        for i in 0..3 {
            acc = acc - na[i].0[i][l];
        }
        v.0[l] = acc;
    }
    v
}

/// Hodge Laplacian on scalars, `Delta f = d* d f`.
pub fn laplacian_scalar<S: Scalar>(ch: &Chart, be: Backend, f: &Expr, x: &[S; 3]) -> S {
    // d* of the gradient one-form: -sum_i (nabla_i df)_i, with the partials
    // of the operator supplied by the backend.
    let df = frame_grad(ch, be, f, x);
    let ddf: [Vec3<S>; 3] = op_grad!(be, x, xx => frame_grad(ch, be, f, xx));
    let n = covariant_from_partials_vec(ch, x, df, &ddf);
    -(n.0[0][0] + n.0[1][1] + n.0[2][2])
}

/// Hodge Laplacian on one-forms, `Delta s = (d d* + d* d) s`.
pub fn laplacian_one_form<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> Vec3<S> {
    // d(d* s): frame gradient of the scalar operator d* s.
    let l = ch.lambda(x);
    let d_div: [S; 3] = op_grad!(be, x, xx => codiff_vec(ch, be, v, xx));
    let d_div = Vec3(std::array::from_fn(|i| d_div[i] * l[i].recip()));

    // d*(d s): codifferential of the 2-form ds. With B the 2-form in pair
    // components, (d* B)_j = -sum_i (nabla_i B)(e_i, e_j).
    let b = d_vec_two_form(ch, be, v, x);
    let db: [[S; 3]; 3] = op_grad!(be, x, xx => d_vec_two_form(ch, be, v, xx));
    let w = ch.omega(x);
    // two-form components as antisymmetric matrix for bookkeeping
    let bm = |p: [S; 3], i: usize, j: usize| -> S {
        match (i, j) {
            (0, 1) => p[0],
            (1, 0) => -p[0],
            (0, 2) => p[1],
            (2, 0) => -p[1],
            (1, 2) => p[2],
            (2, 1) => -p[2],
            _ => S::zero(),
        }
    };
    let mut out = Vec3::zero();
    for j in 0..3 {
        let mut acc = S::zero();
        for i in 0..3 {
            // e_i(B_ij)
            let mut term = bm(db[i], i, j) * l[i].recip();
            // connection corrections on both form slots
            for t in 0..3 {
                term = term + bm(b, t, j) * w[i][t][i] + bm(b, i, t) * w[i][t][j];
            }
            acc = acc - term;
        }
        out.0[j] = acc;
    }
    out + d_div
}

/// Rough Laplacian `nabla* nabla` on covector fields (also the twisted
/// Laplacian on adjoint-valued functions).
pub fn rough_laplacian_vec<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> Vec3<S> {
    let n = lc_vec(ch, be, v, x);
    let dn: [Mat3<S>; 3] = op_grad!(be, x, xx => lc_vec(ch, be, v, xx));
    let nn = covariant_from_partials_mat(ch, x, n, &dn);
    let mut out = Vec3::zero();
    for k in 0..3 {
        let mut acc = S::zero();
        for i in 0..3 {
            acc = acc - nn[i].0[i][k];
        }
        out.0[k] = acc;
    }
    out
}

/// `Delta_LC` on adjoint-valued 0-forms: `d*_LC d_LC xi = nabla* nabla xi`.
pub fn laplacian_lc_vec0<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> Vec3<S> {
    rough_laplacian_vec(ch, be, v, x)
}

/// `Delta_LC` on `T*M`-valued one-forms: `d_LC d*_LC + d*_LC d_LC`.
pub fn laplacian_lc_mat<S: Scalar>(ch: &Chart, be: Backend, a: &MField, x: &[S; 3]) -> Mat3<S> {
    let l = ch.lambda(x);
    let w = ch.omega(x);

    // d_LC (d*_LC a): covariant derivative of the covector-valued operator.
    let da = codiff_mat(ch, be, a, x);
    let dda: [Vec3<S>; 3] = op_grad!(be, x, xx => codiff_mat(ch, be, a, xx));
    let first = covariant_from_partials_vec(ch, x, da, &dda);

    // d*_LC (d_LC a): codifferential of the T*M-valued 2-form.
    let b = dlc_mat(ch, be, a, x);
    let db: [TwoFormV<S>; 3] = op_grad!(be, x, xx => dlc_mat(ch, be, a, xx));
    let bm = |p: &TwoFormV<S>, i: usize, j: usize, lidx: usize| -> S {
        match (i, j) {
            (0, 1) => p[0].0[lidx],
            (1, 0) => -p[0].0[lidx],
            (0, 2) => p[1].0[lidx],
            (2, 0) => -p[1].0[lidx],
            (1, 2) => p[2].0[lidx],
            (2, 1) => -p[2].0[lidx],
            _ => S::zero(),
        }
    };
    let mut second = Mat3::zero();
    for j in 0..3 {
        for lv in 0..3 {
            let mut acc = S::zero();
            for i in 0..3 {
                let mut term = bm(&db[i], i, j, lv) * l[i].recip();
                for t in 0..3 {
                    term = term
                        + bm(&b, t, j, lv) * w[i][t][i]
                        + bm(&b, i, t, lv) * w[i][t][j]
                        + bm(&b, i, j, t) * w[i][t][lv];
                }
                acc = acc - term;
            }
            second.0[j][lv] = acc;
        }
    }
    first + second
}

/// Coordinate-frame covariant derivative of a covector given by coordinate
/// components: `(nabla_i s)_j = d_i s_j - G^k_ij s_k`.
pub fn lc_vec_coord<S: Scalar>(ch: &Chart, be: Backend, v: &VField, x: &[S; 3]) -> Mat3<S> {
    let gam = ch.christoffel(x);
    let s = v.eval(x);
    let grads: [[S; 3]; 3] = std::array::from_fn(|j| be.grad_expr(&v.0[j], x));
    let mut n = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = grads[j][i];
            for k in 0..3 {
                acc = acc - gam[k][i][j] * s.0[k];
            }
            n.0[i][j] = acc;
        }
    }
    n
}

/// Sectional curvature of the coordinate plane (i, j) from the Christoffel
/// jets; used to validate the closed-form chart data.
pub fn sectional_curvature(ch: &Chart, x: &[f64; 3], i: usize, j: usize) -> f64 {
    assert!(i != j);
    let gam = ch.christoffel(x);
    let dgam = op_grad!(Backend::Ad, x, xx => {
        let g = ch.christoffel(xx);
        // flatten to a pair of matrices we can stencil: pack as Mat3 rows
        [Mat3(g[0]), Mat3(g[1]), Mat3(g[2])]
    });
    // R^l_{k i j} = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
    let r = |l: usize, k: usize| {
        let mut acc = dgam[i][l].0[j][k] - dgam[j][l].0[i][k];
        for m in 0..3 {
            acc += gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k];
        }
        acc
    };
    // K(i,j) = <R(d_i, d_j) d_j, d_i> / (|d_i|^2 |d_j|^2) = R^i_{j i j} / lambda_j^2
    let l = ch.lambda(x);
    r(i, j) / (l[j] * l[j])
}

/// Cotton tensor from the chart's closed-form Schouten tensor, orthonormal
/// components: `C = *_3 d_LC P`.
pub fn cotton_chart<S: Scalar>(ch: &Chart, be: Backend, x: &[S; 3]) -> Mat3<S> {
    let p = MField::constant(ch.schouten());
    star_dlc_mat(ch, be, &p, x)
}

// ---------------------------------------------------------------------------
// Metric-field path (coordinate components): used by the Cotton operator on
// perturbed metrics.
// ---------------------------------------------------------------------------

/// A metric given as a field of coordinate components.
#[derive(Clone, Debug)]
pub struct MetricField(pub MField);

impl MetricField {
    pub fn of_chart(ch: &Chart) -> Self {
        // diagonal conformal metrics in closed form
        let comp = |i: usize| -> Expr {
            match ch.kind {
                ChartKind::Euclidean | ChartKind::ProductCircleFlat | ChartKind::Torus3 => {
                    Expr::Const(1.0)
                }
                ChartKind::Ball => {
                    // (2/(1-r^2))^2
                    let r2 = Expr::Poly(vec![(1.0, [2, 0, 0]), (1.0, [0, 2, 0]), (1.0, [0, 0, 2])]);
                    let denom = Expr::Poly(vec![(1.0, [0, 0, 0])]).add(r2.scale(-1.0));
                    Expr::Const(4.0).mul(denom.clone().mul(denom).recip())
                }
                ChartKind::HalfSpace => {
                    Expr::Prod(
                        Box::new(Expr::Recip(Box::new(Expr::Coord(2)))),
                        Box::new(Expr::Recip(Box::new(Expr::Coord(2)))),
                    )
                }
                ChartKind::ProductCircleHyperbolic => {
                    if i == 0 {
                        Expr::Const(1.0)
                    } else {
                        let r2 = Expr::Poly(vec![(1.0, [0, 2, 0]), (1.0, [0, 0, 2])]);
                        let denom = Expr::Poly(vec![(1.0, [0, 0, 0])]).add(r2.scale(-1.0));
                        Expr::Const(4.0).mul(denom.clone().mul(denom).recip())
                    }
                }
            }
        };
        let mut m = MField::zero();
        for i in 0..3 {
            m.0[i][i] = comp(i);
        }
        MetricField(m)
    }

    /// Conformal rescaling `e^{2 phi} g`.
    pub fn conformal(&self, phi: &Expr) -> Self {
        let factor = phi.clone().scale(2.0).exp();
        let mut m = MField::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = factor.clone().mul(self.0 .0[i][j].clone());
            }
        }
        MetricField(m)
    }
}

/// Christoffel symbols of a metric field, `G[k][i][j]`.
pub fn christoffel_of_metric<S: Scalar>(
    be: Backend,
    g: &MetricField,
    x: &[S; 3],
) -> ([[[S; 3]; 3]; 3], Mat3<S>, Mat3<S>) {
    let gm = g.0.eval(x);
    let gi = gm.inverse();
    let dg: [[[S; 3]; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| be.grad_expr(&g.0 .0[i][j], x)));
    // dg[i][j][k] = d_k g_ij
    let half = S::from_f64(0.5);
    let gamma = std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = S::zero();
                for l in 0..3 {
                    acc = acc + gi.0[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l]) * half;
                }
                acc
            })
        })
    });
    (gamma, gm, gi)
}

/// Ricci tensor and scalar curvature of a metric field, coordinate
/// components.
pub fn ricci_of_metric<S: Scalar>(be: Backend, g: &MetricField, x: &[S; 3]) -> (Mat3<S>, S) {
    let (gam, _gm, gi) = christoffel_of_metric(be, g, x);
    let dgam: [[Mat3<S>; 3]; 3] = op_grad!(be, x, xx => {
        let (gg, _, _) = christoffel_of_metric(be, g, xx);
        [Mat3(gg[0]), Mat3(gg[1]), Mat3(gg[2])]
    });
    // dgam[k][l] = matrix with entries d_k G^l_ij
    // Ric_jk = R^i_{j i k}·? Use Ric(X,Y) = trace(Z -> R(Z,X)Y):
    // Ric_jk = d_i G^i_jk - d_j G^i_ik + G^i_im G^m_jk - G^i_jm G^m_ik
    let mut ric = Mat3::zero();
    for j in 0..3 {
        for k in 0..3 {
            let mut acc = S::zero();
            for i in 0..3 {
                acc = acc + dgam[i][i].0[j][k] - dgam[j][i].0[i][k];
                for m in 0..3 {
                    acc = acc + gam[i][i][m] * gam[m][j][k] - gam[i][j][m] * gam[m][i][k];
                }
            }
            ric.0[j][k] = acc;
        }
    }
    let mut scal = S::zero();
    for j in 0..3 {
        for k in 0..3 {
            scal = scal + gi.0[j][k] * ric.0[j][k];
        }
    }
    (ric, scal)
}

/// Schouten tensor of a metric field, coordinate components.
pub fn schouten_of_metric<S: Scalar>(be: Backend, g: &MetricField, x: &[S; 3]) -> Mat3<S> {
    let (ric, scal) = ricci_of_metric(be, g, x);
    let gm = g.0.eval(x);
    ric - gm.scale(scal * S::from_f64(0.25))
}

/// Cotton tensor of a metric field, coordinate components
/// `C_ml = 1/2 sqrt(det g) eps_abm g^{ai} g^{bj} (d_LC P)_{ij,l}`.
pub fn cotton_of_metric<S: Scalar>(be: Backend, g: &MetricField, x: &[S; 3]) -> Mat3<S> {
    let (gam, gm, gi) = christoffel_of_metric(be, g, x);
    let p = schouten_of_metric(be, g, x);
    let dp: [Mat3<S>; 3] = op_grad!(be, x, xx => schouten_of_metric(be, g, xx));
    // nabla_i P_jk = d_i P_jk - G^l_ij P_lk - G^l_ik P_jl
    let nabla = |i: usize, j: usize, k: usize| -> S {
        let mut acc = dp[i].0[j][k];
        for l in 0..3 {
            acc = acc - gam[l][i][j] * p.0[l][k] - gam[l][i][k] * p.0[j][l];
        }
        acc
    };
    let sqrtg = gm.det().sqrt();
    let half = S::from_f64(0.5);
    let mut c = Mat3::zero();
    for m in 0..3 {
        for l in 0..3 {
            let mut acc = S::zero();
            for a in 0..3 {
                for b in 0..3 {
                    for i in 0..3 {
                        for j in 0..3 {
                            let e = eps(a, b, m);
                            if e != 0.0 {
                                acc = acc
                                    + S::from_f64(e)
                                        * gi.0[a][i]
                                        * gi.0[b][j]
                                        * (nabla(i, j, l) - nabla(j, i, l));
                            }
                        }
                    }
                }
            }
            c.0[m][l] = acc * half * sqrtg * half;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::M3;
    use rand::SeedableRng;

    fn charts() -> Vec<Chart> {
        [
            ChartKind::Euclidean,
            ChartKind::Ball,
            ChartKind::HalfSpace,
            ChartKind::ProductCircleHyperbolic,
            ChartKind::ProductCircleFlat,
            ChartKind::Torus3,
        ]
        .into_iter()
        .map(Chart::new)
        .collect()
    }

    #[test]
    fn christoffel_symmetry_and_metric_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ch in charts() {
            for _ in 0..20 {
                let x = ch.sample(&mut rng);
                let gam = ch.christoffel(&x);
                for k in 0..3 {
                    for i in 0..3 {
                        for j in 0..3 {
                            assert!((gam[k][i][j] - gam[k][j][i]).abs() < 1e-12);
                        }
                    }
                }
                // coordinate-frame metric compatibility:
                // d_k g_ij = G^l_ki g_lj + G^l_kj g_il
                let dg: [Mat3<f64>; 3] = op_grad!(Backend::Ad, &x, xx => ch.metric(xx));
                let g = ch.metric(&x);
                for k in 0..3 {
                    for i in 0..3 {
                        for j in 0..3 {
                            let mut rhs = 0.0;
                            for l in 0..3 {
                                rhs += gam[l][k][i] * g.0[l][j] + gam[l][k][j] * g.0[i][l];
                            }
                            assert!(
                                (dg[k].0[i][j] - rhs).abs() < 1e-10,
                                "chart {:?}",
                                ch.kind
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sectional_curvature_matches_nominal() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for ch in charts() {
            let expect = |i: usize, j: usize| -> f64 {
                match ch.kind {
                    ChartKind::Ball | ChartKind::HalfSpace => -1.0,
                    ChartKind::ProductCircleHyperbolic => {
                        if i >= 1 && j >= 1 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                    _ => 0.0,
                }
            };
            for _ in 0..10 {
                let x = ch.sample(&mut rng);
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let k = sectional_curvature(&ch, &x, i, j);
                    assert!(
                        (k - expect(i, j)).abs() < 1e-10,
                        "chart {:?} plane ({i},{j}): K = {k}",
                        ch.kind
                    );
                }
            }
        }
    }

    #[test]
    fn half_space_constant_frame_field_example() {
        // sigma = dx3/x3 is the constant orthonormal field e^3; its
        // coordinate covariant derivative at (0,0,1) is diag(-1,-1,0).
        let ch = Chart::new(ChartKind::HalfSpace);
        let v = VField([
            Expr::zero(),
            Expr::zero(),
            Expr::Recip(Box::new(Expr::Coord(2))),
        ]);
        let x = [0.0, 0.0, 1.0];
        let n = lc_vec_coord(&ch, Backend::Ad, &v, &x);
        let want = Mat3::diag(-1.0, -1.0, 0.0);
        assert!((n - want).sup() < 1e-12);
    }

    #[test]
    fn lc_derivative_of_metric_vanishes_orthonormal() {
        // in the orthonormal frame the metric field is the constant identity
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for ch in charts() {
            let gfield = MField::constant(M3::identity());
            for _ in 0..5 {
                let x = ch.sample(&mut rng);
                let n = lc_mat(&ch, Backend::Ad, &gfield, &x);
                for i in 0..3 {
                    assert!(n[i].sup() < 1e-12);
                }
                // and d_LC g = 0
                let d = dlc_mat(&ch, Backend::Ad, &gfield, &x);
                for p in 0..3 {
                    assert!(d[p].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn constant_one_form_on_euclidean_is_parallel() {
        let ch = Chart::new(ChartKind::Euclidean);
        let v = VField::constant([0.3, -0.7, 0.2]);
        let n = lc_vec(&ch, Backend::Ad, &v, &[0.1, 0.2, 0.3]);
        assert!(n.sup() < 1e-15);
    }

    #[test]
    fn star_star_is_identity_and_d_squared_zero() {
        // *3 on one-forms then on two-forms is the identity: encoded by
        // skew_of_vec / vec_of_skew round trip plus the pair convention.
        let v = crate::algebra::Vec3([0.4, -0.2, 0.9]);
        let b: TwoFormV<f64> = [
            crate::algebra::Vec3([0.0, 0.0, v.0[2]]),
            crate::algebra::Vec3([0.0, 0.0, -v.0[1]]),
            crate::algebra::Vec3([0.0, 0.0, v.0[0]]),
        ];
        // mat_of_two_form of (ρ = *v in pair components, value e3) has col 3 = v
        let m = mat_of_two_form(&b);
        assert!((m.col(2) - v).norm() < 1e-15);

        // d(df) = 0 for a random polynomial on every chart
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for ch in charts() {
            let f = Expr::random_poly(&mut rng, 3, 1.0);
            let x = ch.sample(&mut rng);
            // df as a VField cannot be formed directly (operator), so test
            // d^2 via the antisymmetrized covariant Hessian of f.
            let df = frame_grad(&ch, Backend::Ad, &f, &x);
            let ddf: [crate::algebra::Vec3<f64>; 3] =
                op_grad!(Backend::Ad, &x, xx => frame_grad(&ch, Backend::Ad, &f, xx));
            let n = covariant_from_partials_vec(&ch, &x, df, &ddf);
            for p in 0..3 {
                let (i, j) = PAIRS[p];
                assert!((n.0[i][j] - n.0[j][i]).abs() < 1e-10, "chart {:?}", ch.kind);
            }
        }
    }

    #[test]
    fn laplacian_scalar_flat_matches_euclidean() {
        let ch = Chart::new(ChartKind::Euclidean);
        // f = x0^2 + 3 x1 x2: Delta_Hodge = -div grad = -(2) = -2
        let f = Expr::Poly(vec![(1.0, [2, 0, 0]), (3.0, [0, 1, 1])]);
        let v = laplacian_scalar(&ch, Backend::Ad, &f, &[0.3, 0.1, -0.4]);
        assert!((v - (-2.0)).abs() < 1e-12);
    }

    #[test]
    fn one_form_laplacian_matches_bochner() {
        // Delta = nabla*nabla + Ric on one-forms; Ric is a constant multiple
        // of the identity on these charts.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ch in charts() {
            let v = VField::random_poly(&mut rng, 3, 1.0);
            for _ in 0..3 {
                let x = ch.sample(&mut rng);
                let hodge = laplacian_one_form(&ch, Backend::Ad, &v, &x);
                let rough = rough_laplacian_vec(&ch, Backend::Ad, &v, &x);
                let ric = ch.ricci();
                let bochner = rough + ric.mul_vec(v.eval(&x));
                assert!(
                    (hodge - bochner).norm() < 1e-8,
                    "chart {:?}: {:?} vs {:?}",
                    ch.kind,
                    hodge,
                    bochner
                );
            }
        }
    }

    #[test]
    fn cotton_vanishes_on_charts() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for ch in charts() {
            for _ in 0..5 {
                let x = ch.sample(&mut rng);
                let c = cotton_chart(&ch, Backend::Ad, &x);
                assert!(c.sup() < 1e-12, "chart {:?}", ch.kind);
            }
        }
    }

    #[test]
    fn metric_field_pipeline_on_hyperbolic_ball() {
        let ch = Chart::new(ChartKind::Ball);
        let g = MetricField::of_chart(&ch);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let x = ch.sample(&mut rng);
            let (ric, scal) = ricci_of_metric(Backend::Ad, &g, &x);
            // Ric = -2 g in coordinates
            let gm = g.0.eval(&x);
            assert!((ric - gm.scale(-2.0)).sup() < 1e-8 * gm.sup());
            assert!((scal - (-6.0)).abs() < 1e-8);
            let c = cotton_of_metric(Backend::Ad, &g, &x);
            assert!(c.sup() < 1e-7, "cotton {:?}", c);
        }
    }

    #[test]
    fn cotton_of_perturbed_flat_metric_symmetric_tracefree() {
        let ch = Chart::new(ChartKind::Euclidean);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..5 {
            let x = ch.sample(&mut rng);
            let mut h = MField::random_poly(&mut rng, 3, 1.0);
            // symmetrize the perturbation
            for i in 0..3 {
                for j in 0..i {
                    h.0[i][j] = h.0[j][i].clone();
                }
            }
            let mut gm = MField::zero();
            for i in 0..3 {
                for j in 0..3 {
                    let base = if i == j { 1.0 } else { 0.0 };
                    gm.0[i][j] = Expr::Const(base).add(h.0[i][j].clone().scale(0.05));
                }
            }
            let g = MetricField(gm);
            let c = cotton_of_metric(Backend::Ad, &g, &x);
            assert!((c - c.transpose()).sup() < 1e-8, "not symmetric: {c:?}");
            let gi = g.0.eval(&x).inverse();
            let mut tr = 0.0;
            for m in 0..3 {
                for l in 0..3 {
                    tr += gi.0[m][l] * c.0[m][l];
                }
            }
            assert!(tr.abs() < 1e-8, "trace {tr}");
        }
    }

    #[test]
    fn cotton_conformal_covariance() {
        let ch = Chart::new(ChartKind::Euclidean);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..3 {
            let x = ch.sample(&mut rng);
            let mut h = MField::random_poly(&mut rng, 3, 1.0);
            for i in 0..3 {
                for j in 0..i {
                    h.0[i][j] = h.0[j][i].clone();
                }
            }
            let mut gm = MField::zero();
            for i in 0..3 {
                for j in 0..3 {
                    let base = if i == j { 1.0 } else { 0.0 };
                    gm.0[i][j] = Expr::Const(base).add(h.0[i][j].clone().scale(0.05));
                }
            }
            let g = MetricField(gm);
            let phi = Expr::random_poly(&mut rng, 2, 0.2);
            let gt = g.conformal(&phi);
            let c = cotton_of_metric(Backend::Ad, &g, &x);
            let ct = cotton_of_metric(Backend::Ad, &gt, &x);
            let scale = (-phi.eval(&x)).exp();
            let want = c.scale(scale);
            let denom = want.sup().max(1e-6);
            assert!(
                (ct - want).sup() / denom < 1e-6,
                "covariance broke: {:?} vs {:?}",
                ct,
                want
            );
        }
    }
}
