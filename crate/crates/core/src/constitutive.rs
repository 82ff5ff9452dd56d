//! Constitutive maps between loads and geometrically exact strains.
//!
//! Strains and loads are both handled internally as six-vectors ordered
//! `(u1, u2, u3, v1, v2, v3 - 1)` and `(m1, m2, m3, n1, n2, n3)`. The strain
//! quadratic form is `Q(w) = w^T A w` with
//!
//! ```text
//! A = diag(alpha^2, alpha^2, beta^2, zeta^2, zeta^2, eta^2) + iota (e3 e6^T + e6 e3^T)
//! ```
//!
//! and the load form is its dual, `Q*(y) = y^T A^{-1} y`. The forward map is
//! `w = F(Q*) A^{-1} y` with `F = (1 + Q*^{p/2})^{-1/p}`, the inverse map is
//! `y = G(Q) A w` with `G = (1 - Q^{p/2})^{-1/p}`.

use nalgebra::{Matrix6, SymmetricEigen, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::Material;
use crate::quadrature;

/// Geometric strains: flexure `u1, u2`, twist `u3`, shear `v1, v2`, dilatation `v3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 6]", into = "[f64; 6]")]
pub struct Strains {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

/// Contact couple `m` and contact force `n` in the director frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 6]", into = "[f64; 6]")]
pub struct Loads {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl Strains {
    /// The unstressed straight rod.
    pub const REFERENCE: Strains = Strains {
        u1: 0.0,
        u2: 0.0,
        u3: 0.0,
        v1: 0.0,
        v2: 0.0,
        v3: 1.0,
    };

    pub fn new(u: [f64; 3], v: [f64; 3]) -> Self {
        Self {
            u1: u[0],
            u2: u[1],
            u3: u[2],
            v1: v[0],
            v2: v[1],
            v3: v[2],
        }
    }

    pub fn u(&self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }

    pub fn v(&self) -> [f64; 3] {
        [self.v1, self.v2, self.v3]
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.u1, self.u2, self.u3, self.v1, self.v2, self.v3]
    }

    /// `(u1, u2, u3, v1, v2, v3 - 1)`.
    pub fn deviation(&self) -> Vector6<f64> {
        Vector6::new(self.u1, self.u2, self.u3, self.v1, self.v2, self.v3 - 1.0)
    }

    pub fn from_deviation(w: &Vector6<f64>) -> Self {
        Self {
            u1: w[0],
            u2: w[1],
            u3: w[2],
            v1: w[3],
            v2: w[4],
            v3: 1.0 + w[5],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }
}

impl From<[f64; 6]> for Strains {
    fn from(a: [f64; 6]) -> Self {
        Self {
            u1: a[0],
            u2: a[1],
            u3: a[2],
            v1: a[3],
            v2: a[4],
            v3: a[5],
        }
    }
}

impl From<Strains> for [f64; 6] {
    fn from(s: Strains) -> Self {
        s.to_array()
    }
}

impl Loads {
    pub const ZERO: Loads = Loads {
        m1: 0.0,
        m2: 0.0,
        m3: 0.0,
        n1: 0.0,
        n2: 0.0,
        n3: 0.0,
    };

    pub fn new(m: [f64; 3], n: [f64; 3]) -> Self {
        Self {
            m1: m[0],
            m2: m[1],
            m3: m[2],
            n1: n[0],
            n2: n[1],
            n3: n[2],
        }
    }

    pub fn m(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }

    pub fn n(&self) -> [f64; 3] {
        [self.n1, self.n2, self.n3]
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.m1, self.m2, self.m3, self.n1, self.n2, self.n3]
    }

    pub fn to_vector(self) -> Vector6<f64> {
        Vector6::from(self.to_array())
    }

    pub fn from_vector(y: &Vector6<f64>) -> Self {
        Self {
            m1: y[0],
            m2: y[1],
            m3: y[2],
            n1: y[3],
            n2: y[4],
            n3: y[5],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

impl From<[f64; 6]> for Loads {
    fn from(a: [f64; 6]) -> Self {
        Self {
            m1: a[0],
            m2: a[1],
            m3: a[2],
            n1: a[3],
            n2: a[4],
            n3: a[5],
        }
    }
}

impl From<Loads> for [f64; 6] {
    fn from(l: Loads) -> Self {
        l.to_array()
    }
}

/// Second derivatives of the stored energy, ordered `(u1, u2, u3, v1, v2, v3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianMatrix(pub Matrix6<f64>);

impl HessianMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn max_asymmetry(&self) -> f64 {
        (self.0 - self.0.transpose()).abs().max()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.0).eigenvalues.min()
    }

    /// `x^T H x`.
    pub fn quadratic(&self, x: &Vector6<f64>) -> f64 {
        x.dot(&(self.0 * x))
    }
}

/// Open upper bounds on the strain magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrainBounds {
    /// Bound on `(u1^2 + u2^2)^{1/2}`.
    pub flexure: f64,
    /// Bound on `|u3|`.
    pub twist: f64,
    /// Bound on `(v1^2 + v2^2)^{1/2}`.
    pub shear: f64,
    /// Bound on `|v3 - 1|`.
    pub dilatation: f64,
}

impl StrainBounds {
    /// Whether every bound holds strictly.
    pub fn strictly_contains(&self, s: &Strains) -> bool {
        s.u1.hypot(s.u2) < self.flexure
            && s.u3.abs() < self.twist
            && s.v1.hypot(s.v2) < self.shear
            && (s.v3 - 1.0).abs() < self.dilatation
    }
}

/// `A w` for a strain deviation `w`.
pub fn apply_strain_form(mat: &Material, w: &Vector6<f64>) -> Vector6<f64> {
    let (a2, b2, z2, e2, i) = (
        mat.alpha().powi(2),
        mat.beta().powi(2),
        mat.zeta().powi(2),
        mat.eta().powi(2),
        mat.iota(),
    );
    Vector6::new(
        a2 * w[0],
        a2 * w[1],
        b2 * w[2] + i * w[5],
        z2 * w[3],
        z2 * w[4],
        i * w[2] + e2 * w[5],
    )
}

/// `A^{-1} y` for a load vector `y`.
pub fn apply_load_form(mat: &Material, y: &Vector6<f64>) -> Vector6<f64> {
    let (a2, b2, z2, e2, i, d) = (
        mat.alpha().powi(2),
        mat.beta().powi(2),
        mat.zeta().powi(2),
        mat.eta().powi(2),
        mat.iota(),
        mat.det(),
    );
    Vector6::new(
        y[0] / a2,
        y[1] / a2,
        (e2 * y[2] - i * y[5]) / d,
        y[3] / z2,
        y[4] / z2,
        (-i * y[2] + b2 * y[5]) / d,
    )
}

/// The strain matrix `A` itself (the Hessian of `W` at the reference state).
pub fn strain_form_matrix(mat: &Material) -> Matrix6<f64> {
    let mut a = Matrix6::zeros();
    let a2 = mat.alpha().powi(2);
    let z2 = mat.zeta().powi(2);
    a[(0, 0)] = a2;
    a[(1, 1)] = a2;
    a[(2, 2)] = mat.beta().powi(2);
    a[(3, 3)] = z2;
    a[(4, 4)] = z2;
    a[(5, 5)] = mat.eta().powi(2);
    a[(2, 5)] = mat.iota();
    a[(5, 2)] = mat.iota();
    a
}

/// `Q` evaluated on a bare deviation vector, i.e. the form `Q(a, b)` on directions.
pub fn quad_form_deviation(mat: &Material, w: &Vector6<f64>) -> f64 {
    let a2 = mat.alpha().powi(2);
    let z2 = mat.zeta().powi(2);
    a2 * (w[0] * w[0] + w[1] * w[1])
        + mat.beta().powi(2) * w[2] * w[2]
        + z2 * (w[3] * w[3] + w[4] * w[4])
        + mat.eta().powi(2) * w[5] * w[5]
        + 2.0 * mat.iota() * w[2] * w[5]
}

/// `Q(u, v)`.
pub fn quad_form_q(mat: &Material, strains: &Strains) -> f64 {
    quad_form_deviation(mat, &strains.deviation())
}

/// `Q*(m, n)`, the dual form of `Q`.
pub fn quad_form_qstar(mat: &Material, loads: &Loads) -> f64 {
    let y = loads.to_vector();
    let a2 = mat.alpha().powi(2);
    let z2 = mat.zeta().powi(2);
    (y[0] * y[0] + y[1] * y[1]) / a2
        + (y[3] * y[3] + y[4] * y[4]) / z2
        + (mat.eta().powi(2) * y[2] * y[2] + mat.beta().powi(2) * y[5] * y[5] - 2.0 * mat.iota() * y[2] * y[5])
            / mat.det()
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

// Q* above which the compliance factor is evaluated in log space.
const LOG_SPACE_QSTAR: f64 = 1e100;

/// The compliance factor `F = (1 + Q*^{p/2})^{-1/p}` for a given `Q*`.
pub fn compliance_factor(mat: &Material, qstar: f64) -> f64 {
    let p = mat.p();
    if qstar <= LOG_SPACE_QSTAR {
        (1.0 + qstar.powf(0.5 * p)).powf(-1.0 / p)
    } else {
        (-softplus(0.5 * p * qstar.ln()) / p).exp()
    }
}

/// Forward map: loads to strains.
///
/// Total on finite loads. The result always satisfies `Q(u, v) < 1` and the
/// four strain bounds as evaluated in floating point: when rounding would put
/// the exact value on the limit surface, the deviation is pulled inward by a
/// few ulps.
pub fn strains_from_loads(mat: &Material, loads: &Loads) -> Strains {
    let y = loads.to_vector();
    let scale = loads.max_abs();
    if scale == 0.0 {
        return Strains::REFERENCE;
    }
    let y_hat = y / scale;
    let q_hat = quad_form_qstar(mat, &Loads::from_vector(&y_hat));
    let ln_qstar = 2.0 * scale.ln() + q_hat.ln();
    let w = if ln_qstar <= LOG_SPACE_QSTAR.ln() {
        let f = compliance_factor(mat, scale * scale * q_hat);
        apply_load_form(mat, &y) * f
    } else {
        let p = mat.p();
        let f_times_scale = (scale.ln() - softplus(0.5 * p * ln_qstar) / p).exp();
        apply_load_form(mat, &y_hat) * f_times_scale
    };
    pull_inside(mat, w)
}

fn pull_inside(mat: &Material, w: Vector6<f64>) -> Strains {
    let bounds = strain_bounds(mat);
    let mut strains = Strains::from_deviation(&w);
    let mut k = 0u32;
    while !(quad_form_q(mat, &strains) < 1.0 && bounds.strictly_contains(&strains)) {
        k += 1;
        let shrink = 1.0 - 4.0 * f64::EPSILON * f64::from(k);
        strains = Strains::from_deviation(&(w * shrink));
        if k > 64 {
            break;
        }
    }
    strains
}

/// `G = (1 - Q^{p/2})^{-1/p}` and the checked value of `Q`.
fn stiffness_factor(mat: &Material, strains: &Strains) -> Result<(f64, f64)> {
    let q = quad_form_q(mat, strains);
    if !(q < 1.0) {
        return Err(Error::StrainOutOfRange(q));
    }
    Ok((one_minus_qp(mat.p(), q).powf(-1.0 / mat.p()), q))
}

/// `1 - Q^{p/2}` without cancellation.
fn one_minus_qp(p: f64, q: f64) -> f64 {
    if q == 0.0 {
        1.0
    } else {
        -(0.5 * p * q.ln()).exp_m1()
    }
}

/// Inverse map: strains to loads. Requires `Q(u, v) < 1`.
pub fn loads_from_strains(mat: &Material, strains: &Strains) -> Result<Loads> {
    let (g, _) = stiffness_factor(mat, strains)?;
    Ok(Loads::from_vector(&(apply_strain_form(mat, &strains.deviation()) * g)))
}

const ENERGY_ABS_TOL: f64 = 1e-14;
const ENERGY_REL_TOL: f64 = 1e-14;
// Below this Q the stored-energy integrand is integrated in t directly.
const STORED_SPLIT: f64 = 0.5;

/// Stored energy `W = (1/2) int_0^Q (1 - t^{p/2})^{-1/p} dt`.
pub fn stored_energy(mat: &Material, strains: &Strains) -> Result<f64> {
    let q = quad_form_q(mat, strains);
    if !(q < 1.0) {
        return Err(Error::StrainOutOfRange(q));
    }
    Ok(stored_energy_of_q(mat.p(), q))
}

/// Stored energy as a function of `Q` alone.
pub fn stored_energy_of_q(p: f64, q: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        // 1 - sqrt(1 - Q), rationalized
        return q / (1.0 + (1.0 - q).sqrt());
    }
    let integrand = |t: f64| (-(0.5 * p * t.ln()).exp_m1()).powf(-1.0 / p);
    if q <= STORED_SPLIT {
        return 0.5 * quadrature::integrate(integrand, 0.0, q, ENERGY_ABS_TOL, ENERGY_REL_TOL).value;
    }
    let head = quadrature::integrate(integrand, 0.0, STORED_SPLIT, ENERGY_ABS_TOL, ENERGY_REL_TOL).value;
    // With 1 - t^{p/2} = e^{-x}: dt = (2/p) e^{-x} (1 - e^{-x})^{2/p - 1} dx and
    // the integrand becomes (2/p) e^{-x(1 - 1/p)} (1 - e^{-x})^{2/p - 1}, smooth on the tail.
    let x0 = -one_minus_qp(p, STORED_SPLIT).ln();
    let x1 = -one_minus_qp(p, q).ln();
    let tail = quadrature::integrate(
        |x: f64| (2.0 / p) * (-x * (1.0 - 1.0 / p)).exp() * (-(-x).exp_m1()).powf(2.0 / p - 1.0),
        x0,
        x1,
        ENERGY_ABS_TOL,
        ENERGY_REL_TOL,
    )
    .value;
    0.5 * (head + tail)
}

/// Complementary energy `W* = (1/2) int_0^{Q*} (1 + t^{p/2})^{-1/p} dt`.
pub fn complementary_energy(mat: &Material, loads: &Loads) -> f64 {
    complementary_energy_of_qstar(mat.p(), quad_form_qstar(mat, loads))
}

/// Complementary energy as a function of `Q*` alone.
pub fn complementary_energy_of_qstar(p: f64, qstar: f64) -> f64 {
    if qstar <= 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        // sqrt(1 + Q*) - 1, rationalized
        return qstar / ((1.0 + qstar).sqrt() + 1.0);
    }
    let integrand = |t: f64| (1.0 + t.powf(0.5 * p)).powf(-1.0 / p);
    if qstar <= 1.0 {
        return 0.5 * quadrature::integrate(integrand, 0.0, qstar, ENERGY_ABS_TOL, ENERGY_REL_TOL).value;
    }
    let head = quadrature::integrate(integrand, 0.0, 1.0, ENERGY_ABS_TOL, ENERGY_REL_TOL).value;
    // t = e^x on [1, Q*]
    let tail = quadrature::integrate(
        |x: f64| (-softplus(0.5 * p * x) / p + x).exp(),
        0.0,
        qstar.ln(),
        ENERGY_ABS_TOL,
        ENERGY_REL_TOL,
    )
    .value;
    0.5 * (head + tail)
}

// Q below which the Hessian is replaced by its reference-state limit.
const HESSIAN_REFERENCE_Q: f64 = 1e-14;

/// `D^2 W`. Requires `Q(u, v) < 1`.
pub fn hessian(mat: &Material, strains: &Strains) -> Result<HessianMatrix> {
    let q = quad_form_q(mat, strains);
    if !(q < 1.0) {
        return Err(Error::StrainOutOfRange(q));
    }
    let a = strain_form_matrix(mat);
    if q < HESSIAN_REFERENCE_Q {
        return Ok(HessianMatrix(a));
    }
    let p = mat.p();
    let c = one_minus_qp(p, q);
    let aw = apply_strain_form(mat, &strains.deviation());
    let rank_one = aw * aw.transpose() * q.powf(0.5 * p - 1.0);
    Ok(HessianMatrix((a * c + rank_one) * c.powf(-1.0 / p - 1.0)))
}

/// Both sides of the quadratic-form identity satisfied by the Hessian along a
/// direction `x`:
///
/// ```text
/// (1 - Q^{p/2})^{1/p + 1} x^T D^2W x = (1 - Q^{p/2}) Q(x) + Q^{p/2 - 1} (x^T A w)^2
/// ```
pub fn hessian_identity_sides(mat: &Material, strains: &Strains, direction: &Vector6<f64>) -> Result<(f64, f64)> {
    let h = hessian(mat, strains)?;
    let q = quad_form_q(mat, strains);
    let p = mat.p();
    let c = one_minus_qp(p, q);
    let lhs = c.powf(1.0 / p + 1.0) * h.quadratic(direction);
    let coupling = direction.dot(&apply_strain_form(mat, &strains.deviation()));
    let rhs = c * quad_form_deviation(mat, direction) + q.powf(0.5 * p - 1.0) * coupling * coupling;
    Ok((lhs, rhs))
}

pub fn strain_bounds(mat: &Material) -> StrainBounds {
    let root = mat.det().sqrt();
    StrainBounds {
        flexure: 1.0 / mat.alpha(),
        twist: mat.eta() / root,
        shear: 1.0 / mat.zeta(),
        dilatation: mat.beta() / root,
    }
}

/// Transverse symmetry actions on strains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetryAction {
    /// `R_psi` on both `u` and `v`.
    Rotation(f64),
    /// `E = diag(1, -1, 1)` on both `u` and `v`.
    Flip,
    /// `E` on `u` and `-E` on the strain deviation `v - (0, 0, 1)`.
    FlipReflect,
}

/// Applies a symmetry action to the strain deviation `(u, v - e3)`.
pub fn symmetry_transform(action: SymmetryAction, strains: &Strains) -> Strains {
    let u = strains.u();
    let d = [strains.v1, strains.v2, strains.v3 - 1.0];
    let rotate = |x: [f64; 3], psi: f64| {
        let (s, c) = psi.sin_cos();
        [c * x[0] + s * x[1], -s * x[0] + c * x[1], x[2]]
    };
    let flip = |x: [f64; 3]| [x[0], -x[1], x[2]];
    let (u, d) = match action {
        SymmetryAction::Rotation(psi) => (rotate(u, psi), rotate(d, psi)),
        SymmetryAction::Flip => (flip(u), flip(d)),
        SymmetryAction::FlipReflect => {
            let fd = flip(d);
            (flip(u), [-fd[0], -fd[1], -fd[2]])
        }
    };
    Strains::new(u, [d[0], d[1], 1.0 + d[2]])
}
