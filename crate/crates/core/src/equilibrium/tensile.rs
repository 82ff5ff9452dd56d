//! Equilibria under an isolated end thrust `n = N g3`: the straight tensile
//! branch, its limiting strains, the shearing bifurcation and the sheared branch.

use serde::{Deserialize, Serialize};

use crate::constitutive::{Loads, Strains};
use crate::error::{BifurcationCondition, Error, Result};
use crate::material::Material;

/// Outcome of the bifurcation analysis for a material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bifurcation {
    /// The sheared branch leaves the straight branch at this thrust.
    Threshold(f64),
    /// No sheared branch; the named necessary condition fails.
    Absent(BifurcationCondition),
}

impl Bifurcation {
    pub fn threshold(&self) -> Option<f64> {
        match self {
            Bifurcation::Threshold(n) => Some(*n),
            Bifurcation::Absent(_) => None,
        }
    }

    pub fn require(&self) -> Result<f64> {
        match self {
            Bifurcation::Threshold(n) => Ok(*n),
            Bifurcation::Absent(c) => Err(Error::NoBifurcation(*c)),
        }
    }
}

/// `(beta^2 eta^2 - iota^2) / (beta^2 zeta^2) - 1`; the sheared dilatation is its reciprocal.
pub fn shear_modulus_gap(mat: &Material) -> f64 {
    mat.det() / (mat.beta().powi(2) * mat.zeta().powi(2)) - 1.0
}

/// Constant strains of the straight branch (`theta = 0`) at thrust `N`.
pub fn trivial_strains(mat: &Material, thrust: f64) -> Strains {
    let det = mat.det();
    let p = mat.p();
    let factor = (1.0 + mat.beta().powf(p) * thrust.abs().powf(p) / det.powf(0.5 * p)).powf(-1.0 / p);
    Strains::new(
        [0.0, 0.0, factor * (-mat.iota() * thrust) / det],
        [0.0, 0.0, 1.0 + factor * mat.beta().powi(2) * thrust / det],
    )
}

/// Limits of the straight-branch strains as `N -> +inf` and `N -> -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThrustLimits {
    pub u3_plus: f64,
    pub u3_minus: f64,
    pub dilatation_plus: f64,
    pub dilatation_minus: f64,
}

pub fn limiting_strains_thrust(mat: &Material) -> ThrustLimits {
    let root = mat.det().sqrt();
    let u3 = mat.iota() / (mat.beta() * root);
    let dil = mat.beta() / root;
    ThrustLimits {
        u3_plus: -u3,
        u3_minus: u3,
        dilatation_plus: dil,
        dilatation_minus: -dil,
    }
}

pub fn shear_threshold(mat: &Material) -> Bifurcation {
    let gap = shear_modulus_gap(mat);
    if !(gap > 0.0) {
        return Bifurcation::Absent(BifurcationCondition::ModulusOrdering);
    }
    let det = mat.det();
    let beta = mat.beta();
    if !(1.0 / gap < beta / det.sqrt()) {
        return Bifurcation::Absent(BifurcationCondition::LimitingDilatation);
    }
    let p = mat.p();
    let inv = (gap * beta * beta / det).powf(p) - (beta / det.sqrt()).powf(p);
    Bifurcation::Threshold(inv.powf(-1.0 / p))
}

/// `f_N` of the sheared-branch condition written in terms of `(cos theta, sin theta)`.
pub fn sheared_dilatation(mat: &Material, thrust: f64, cos_t: f64, sin_t: f64) -> f64 {
    let p = mat.p();
    let det = mat.det();
    let b2 = mat.beta().powi(2);
    let spread = sin_t * sin_t / mat.zeta().powi(2) + b2 * cos_t * cos_t / det;
    (thrust.abs().powf(-p) + spread.powf(0.5 * p)).powf(-1.0 / p) * b2 * cos_t / det
}

/// The angle `theta_hat(N)` of the sheared branch, in `(0, pi/2)` for `N > N_thresh`.
///
/// Negative thrusts use the reflection `N -> -N`, `theta -> pi - theta`.
pub fn sheared_angle(mat: &Material, thrust: f64) -> Result<f64> {
    let threshold = shear_threshold(mat).require()?;
    if !(thrust.abs() > threshold) {
        return Err(Error::BelowThreshold { thrust, threshold });
    }
    let target = 1.0 / shear_modulus_gap(mat);
    let n = thrust.abs();
    // f_N decreases in theta; bisect on theta for accuracy near the bifurcation point.
    let (mut lo, mut hi) = (0.0_f64, std::f64::consts::FRAC_PI_2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-15 {
            break;
        }
        let (s, c) = mid.sin_cos();
        if sheared_dilatation(mat, n, c, s) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    Ok(if thrust < 0.0 {
        std::f64::consts::PI - theta
    } else {
        theta
    })
}

/// Closed-form `theta_hat(N)` for `p = 2`.
pub fn sheared_angle_p2(mat: &Material, thrust: f64) -> Result<f64> {
    let threshold = shear_threshold(mat).require()?;
    if !(thrust.abs() > threshold) {
        return Err(Error::BelowThreshold { thrust, threshold });
    }
    let c = 1.0 / mat.zeta().powi(2) - mat.beta().powi(2) / mat.det();
    let x = ((thrust.powi(-2) + 1.0 / mat.zeta().powi(2)) / (c * c + c)).sqrt();
    let theta = x.acos();
    Ok(if thrust < 0.0 {
        std::f64::consts::PI - theta
    } else {
        theta
    })
}

/// `lim_{N -> inf} theta_hat(N)`.
pub fn theta_infinity(mat: &Material) -> Result<f64> {
    shear_threshold(mat).require()?;
    let c = 1.0 / mat.zeta().powi(2) - mat.beta().powi(2) / mat.det();
    Ok(((c * c + c).powf(-0.5) / mat.zeta()).acos())
}

/// Both sides of the identity satisfied along the sheared branch:
///
/// ```text
/// [1 + (N^2 sin^2/zeta^2 + beta^2 N^2 cos^2/det)^{p/2}]^{-1/p} = det / (beta^2 N cos(theta) gap)
/// ```
pub fn bifurcation_identity_sides(mat: &Material, thrust: f64, theta: f64) -> (f64, f64) {
    let p = mat.p();
    let det = mat.det();
    let b2 = mat.beta().powi(2);
    let (s, c) = theta.sin_cos();
    let n2 = thrust * thrust;
    let lhs = (1.0 + (n2 * s * s / mat.zeta().powi(2) + b2 * n2 * c * c / det).powf(0.5 * p)).powf(-1.0 / p);
    let rhs = det / (b2 * thrust * c * shear_modulus_gap(mat));
    (lhs, rhs)
}

/// Constants of the sheared state at thrust `N` and angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearedConstants {
    pub theta: f64,
    pub u3: f64,
    pub dilatation: f64,
    /// Amplitude of the oscillating shear strains `(v1, v2)`.
    pub shear_amplitude: f64,
}

pub fn sheared_constants(mat: &Material, thrust: f64) -> Result<ShearedConstants> {
    let theta = sheared_angle(mat, thrust)?;
    let gap = shear_modulus_gap(mat);
    let b2 = mat.beta().powi(2);
    let ratio = mat.det() / (b2 * mat.zeta().powi(2));
    Ok(ShearedConstants {
        theta,
        u3: -mat.iota() / (b2 * gap),
        dilatation: 1.0 / gap,
        shear_amplitude: ratio * theta.tan() / gap,
    })
}

/// Strains on the sheared branch at arclength `s` with phase `psi0`.
pub fn sheared_strains(c: &ShearedConstants, s: f64, psi0: f64) -> Strains {
    let (sn, cs) = (c.u3 * s + psi0).sin_cos();
    Strains::new(
        [0.0, 0.0, c.u3],
        [-c.shear_amplitude * cs, c.shear_amplitude * sn, 1.0 + c.dilatation],
    )
}

/// Which tensile branch a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Trivial,
    Sheared,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Trivial => "trivial",
            Branch::Sheared => "sheared",
        }
    }
}

/// A point on a tensile branch, evaluated at `s = 0` with `psi(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchPoint {
    pub thrust: f64,
    pub theta: f64,
    pub strains: Strains,
    pub loads: Loads,
    pub branch: Branch,
}

impl BranchPoint {
    pub fn shear_amplitude(&self) -> f64 {
        self.strains.v1.hypot(self.strains.v2)
    }
}

/// Director-frame loads for `m = 0`, `n = N g3` at polar angle `theta`, `phi = 0`, phase `psi`.
pub fn thrust_loads(thrust: f64, theta: f64, psi: f64) -> Loads {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = psi.sin_cos();
    Loads::new([0.0; 3], [-thrust * st * cp, thrust * st * sp, thrust * ct])
}

pub fn trivial_point(mat: &Material, thrust: f64) -> BranchPoint {
    BranchPoint {
        thrust,
        theta: 0.0,
        strains: trivial_strains(mat, thrust),
        loads: thrust_loads(thrust, 0.0, 0.0),
        branch: Branch::Trivial,
    }
}

pub fn sheared_point(mat: &Material, thrust: f64) -> Result<BranchPoint> {
    let c = sheared_constants(mat, thrust)?;
    Ok(BranchPoint {
        thrust,
        theta: c.theta,
        strains: sheared_strains(&c, 0.0, 0.0),
        loads: thrust_loads(thrust, c.theta, 0.0),
        branch: Branch::Sheared,
    })
}

/// Both branches on `count` evenly spaced thrusts in `[n_min, n_max]`, sorted by
/// `(N, branch)`. Sheared points appear only for `N > N_thresh`.
pub fn branch_sweep(mat: &Material, n_min: f64, n_max: f64, count: usize) -> Result<Vec<BranchPoint>> {
    if !(n_min.is_finite() && n_max.is_finite() && n_min < n_max) {
        return Err(Error::InvalidArgument(format!(
            "need N_min < N_max, got [{n_min}, {n_max}]"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {count}")));
    }
    let threshold = shear_threshold(mat).threshold();
    let mut points = Vec::with_capacity(2 * count);
    for i in 0..count {
        let t = i as f64 / (count - 1) as f64;
        let thrust = if i == count - 1 {
            n_max
        } else {
            n_min + (n_max - n_min) * t
        };
        points.push(trivial_point(mat, thrust));
        if threshold.is_some_and(|nt| thrust > nt) {
            points.push(sheared_point(mat, thrust)?);
        }
    }
    points.sort_by(|a, b| a.thrust.total_cmp(&b.thrust).then(a.branch.cmp(&b.branch)));
    Ok(points)
}
