//! Explicit equilibrium families and the balance-law checker.
//!
//! Every family here has a constant polar angle and linear `phi`, `psi`, with
//! end loads `m = M_k e_k`, `n = N g3` fixed in the auxiliary basis. That shared
//! shape is [`StatePath`]; a family only has to produce one.

mod balance;
mod couples;
mod families;
mod tensile;

use std::collections::BTreeMap;

use serde::Serialize;

pub use balance::{balance_tolerance, check_balance, check_balance_with_loads, BalanceReport};
pub use couples::{
    bending_radius, helix_constants, limiting_strains_twist, pure_twist_strains, HelixConstants, TwistLimits,
};
pub use families::{
    BendingFamily, FamilyArgs, FamilyRegistry, HelixFamily, ShearedFamily, StateFamily, TrivialFamily, TwistFamily,
};
pub use tensile::{
    bifurcation_identity_sides, branch_sweep, limiting_strains_thrust, shear_modulus_gap, shear_threshold,
    sheared_angle, sheared_angle_p2, sheared_constants, sheared_dilatation, sheared_point, sheared_strains,
    theta_infinity, thrust_loads, trivial_point, trivial_strains, Bifurcation, Branch, BranchPoint, ShearedConstants,
    ThrustLimits,
};

use crate::constitutive::{self, Loads, Strains};
use crate::error::Result;
use crate::kinematics::{
    director_loads, directors_from_euler, AngleRates, Configuration, EulerAngles, Frame, FrameLoads, Vec3,
};
use crate::material::{Material, MaterialParams};

/// `sin(x) / x`, continuous at 0.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Euler-angle path with constant `theta` and constant rates, plus the end loads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatePath {
    pub theta: f64,
    pub phi0: f64,
    pub phi_rate: f64,
    pub psi0: f64,
    pub psi_rate: f64,
    /// Couple components in `{e1, e2, e3}`.
    pub couple: [f64; 3],
    pub thrust: f64,
    /// Closed-form strains at `s = 0`.
    pub strains0: Strains,
}

/// Rotates the `(1, 2)` components of a vector fixed in `{e_k}` from phase 0 to `psi`.
fn corotate(x: [f64; 3], psi: f64) -> [f64; 3] {
    let (s, c) = psi.sin_cos();
    [x[0] * c + x[1] * s, -x[0] * s + x[1] * c, x[2]]
}

impl StatePath {
    pub fn angles(&self, s: f64) -> EulerAngles {
        EulerAngles::new(self.phi0 + self.phi_rate * s, self.theta, self.psi0 + self.psi_rate * s)
    }

    pub fn rates(&self) -> AngleRates {
        AngleRates {
            phi: self.phi_rate,
            theta: 0.0,
            psi: self.psi_rate,
        }
    }

    pub fn frame_loads(&self) -> FrameLoads {
        let (st, ct) = self.theta.sin_cos();
        FrameLoads {
            m: self.couple,
            n: [-self.thrust * st, 0.0, self.thrust * ct],
            thrust: self.thrust,
        }
    }

    pub fn frame(&self, s: f64) -> Frame {
        directors_from_euler(&self.angles(s))
    }

    /// Director-frame loads at `s`.
    pub fn loads(&self, s: f64) -> Loads {
        director_loads(&self.frame_loads(), &self.angles(s))
    }

    // Strain components in {e_k}; constant along the path.
    fn auxiliary_strains(&self) -> ([f64; 3], [f64; 3]) {
        let back = -self.psi0;
        (corotate(self.strains0.u(), back), corotate(self.strains0.v(), back))
    }

    /// Closed-form strains at `s`.
    pub fn strains(&self, s: f64) -> Strains {
        let psi = self.psi0 + self.psi_rate * s;
        let (u, v) = self.auxiliary_strains();
        Strains::new(corotate(u, psi), corotate(v, psi))
    }

    /// Centerline `r(s)` with `r(0) = 0`, integrated exactly.
    pub fn centerline(&self, s: f64) -> Vec3 {
        let (_, v) = self.auxiliary_strains();
        let half = 0.5 * self.phi_rate * s;
        let mid = self.phi0 + half;
        let int_cos = s * mid.cos() * sinc(half);
        let int_sin = s * mid.sin() * sinc(half);
        let (st, ct) = self.theta.sin_cos();
        let e1 = Vec3::new(ct * int_cos, ct * int_sin, -st * s);
        let e2 = Vec3::new(-int_sin, int_cos, 0.0);
        let e3 = Vec3::new(st * int_cos, st * int_sin, ct * s);
        e1 * v[0] + e2 * v[1] + e3 * v[2]
    }

    /// Largest reduced-equation residual at `s` using exact angle rates.
    pub fn reduced_residual(&self, mat: &Material, s: f64) -> f64 {
        crate::kinematics::reduced_residual(mat, &self.angles(s), &self.rates(), &self.frame_loads(), [0.0; 3])
            .iter()
            .fold(0.0, |acc, r| acc.max(r.abs()))
    }
}

/// Inputs and closed-form quantities written next to a sampled state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateDescriptor {
    pub family: String,
    pub params: MaterialParams,
    pub grid_h: f64,
    pub path: StatePath,
    pub loads0: Loads,
    /// Family-specific scalars (threshold, radius, pitch, ...), in key order.
    pub extras: BTreeMap<String, f64>,
}

impl StateDescriptor {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("descriptor serializes");
        text.push('\n');
        text
    }
}

/// A family member sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct EquilibriumState {
    pub descriptor: StateDescriptor,
    pub configuration: Configuration,
    /// Director-frame loads at each sample.
    pub loads: Vec<Loads>,
    /// Closed-form strains at each sample.
    pub strains: Vec<Strains>,
}

/// Output of a family before sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub path: StatePath,
    pub extras: BTreeMap<String, f64>,
}

impl ClosedForm {
    pub fn sample(&self, mat: &Material, family: &str, h: f64) -> Result<EquilibriumState> {
        let path = self.path;
        let configuration = Configuration::sample_with(h, |s| (path.centerline(s), path.frame(s)))?;
        let grid: Vec<f64> = configuration.samples().iter().map(|x| x.s).collect();
        Ok(EquilibriumState {
            descriptor: StateDescriptor {
                family: family.to_string(),
                params: *mat.params(),
                grid_h: configuration.h(),
                path,
                loads0: path.loads(0.0),
                extras: self.extras.clone(),
            },
            loads: grid.iter().map(|&s| path.loads(s)).collect(),
            strains: grid.iter().map(|&s| path.strains(s)).collect(),
            configuration,
        })
    }
}

impl EquilibriumState {
    /// Balance residuals with loads recovered from the sampled configuration.
    pub fn check_balance(&self, mat: &Material) -> Result<BalanceReport> {
        check_balance(mat, &self.configuration, None, None)
    }

    /// Largest gap between the closed-form strains and the forward map of the loads.
    pub fn constitutive_gap(&self, mat: &Material) -> f64 {
        self.strains
            .iter()
            .zip(&self.loads)
            .flat_map(|(s, y)| {
                let f = constitutive::strains_from_loads(mat, y);
                s.to_array().into_iter().zip(f.to_array()).map(|(a, b)| (a - b).abs())
            })
            .fold(0.0, f64::max)
    }
}
