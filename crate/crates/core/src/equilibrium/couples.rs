//! Equilibria under an end couple with no force: pure twist, helices and
//! pure bending.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::constitutive::Strains;
use crate::error::{Error, Result};
use crate::material::Material;

/// Constant strains of the straight twisted rod under `m = M3 d3`, `n = 0`.
pub fn pure_twist_strains(mat: &Material, m3: f64) -> Strains {
    let det = mat.det();
    let p = mat.p();
    let factor = (1.0 + mat.eta().powf(p) * m3.abs().powf(p) / det.powf(0.5 * p)).powf(-1.0 / p);
    Strains::new(
        [0.0, 0.0, factor * mat.eta().powi(2) * m3 / det],
        [0.0, 0.0, 1.0 - factor * mat.iota() * m3 / det],
    )
}

/// Limits of the pure-twist strains as `M3 -> +inf` and `M3 -> -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistLimits {
    pub u3_plus: f64,
    pub u3_minus: f64,
    pub dilatation_plus: f64,
    pub dilatation_minus: f64,
}

pub fn limiting_strains_twist(mat: &Material) -> TwistLimits {
    let root = mat.det().sqrt();
    let u3 = mat.eta() / root;
    let dil = -mat.iota() / (mat.eta() * root);
    TwistLimits {
        u3_plus: u3,
        u3_minus: -u3,
        dilatation_plus: dil,
        dilatation_minus: -dil,
    }
}

/// Constants of the helical state with `m = M1 e1 + M3 e3`, `M3 = -M1 cot(theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixConstants {
    pub theta: f64,
    pub m1: f64,
    pub m3: f64,
    /// Common factor `[1 + |M1|^p (1/alpha^2 + eta^2 cot^2/det)^{p/2}]^{-1/p}`.
    pub factor: f64,
    pub phi_rate: f64,
    pub psi_rate: f64,
    /// `u1 cos(psi) - u2 sin(psi)`, the bending curvature magnitude with sign.
    pub bend: f64,
    pub u3: f64,
    pub v3: f64,
}

impl HelixConstants {
    pub fn strains(&self, psi: f64) -> Strains {
        let (s, c) = psi.sin_cos();
        Strains::new([self.bend * c, -self.bend * s, self.u3], [0.0, 0.0, self.v3])
    }

    /// Radius of the helix traced by the centerline.
    pub fn radius(&self) -> f64 {
        self.v3 * self.theta.sin() / self.phi_rate.abs()
    }

    /// Axial advance per unit arclength.
    pub fn pitch(&self) -> f64 {
        self.v3 * self.theta.cos()
    }

    /// Axial advance per full turn.
    pub fn pitch_per_turn(&self) -> f64 {
        2.0 * PI * self.pitch() / self.phi_rate.abs()
    }
}

/// `theta` must lie in `(0, pi/2]`; `theta = pi/2` is pure bending.
pub fn helix_constants(mat: &Material, m1: f64, theta: f64) -> Result<HelixConstants> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "helix angle theta = {theta} must lie in (0, pi/2]"
        )));
    }
    if !m1.is_finite() {
        return Err(Error::InvalidArgument(format!("couple M1 = {m1} must be finite")));
    }
    if m1 == 0.0 {
        return Err(Error::DegenerateCouple);
    }
    let p = mat.p();
    let det = mat.det();
    let a2 = mat.alpha().powi(2);
    let e2 = mat.eta().powi(2);
    let cot = if theta == FRAC_PI_2 {
        0.0
    } else {
        theta.cos() / theta.sin()
    };
    let spread = 1.0 / a2 + e2 * cot * cot / det;
    let factor = (1.0 + m1.abs().powf(p) * spread.powf(0.5 * p)).powf(-1.0 / p);
    let u3 = -factor * e2 * m1 * cot / det;
    Ok(HelixConstants {
        theta,
        m1,
        m3: -m1 * cot,
        factor,
        phi_rate: -factor * m1 / (a2 * theta.sin()),
        psi_rate: -(1.0 - det / (a2 * e2)) * factor * e2 * m1 * cot / det,
        bend: factor * m1 / a2,
        u3,
        v3: 1.0 + factor * mat.iota() * m1 * cot / det,
    })
}

/// Radius of the circle traced under pure bending by `M1`.
pub fn bending_radius(mat: &Material, m1: f64) -> Result<f64> {
    Ok(helix_constants(mat, m1, FRAC_PI_2)?.radius())
}
