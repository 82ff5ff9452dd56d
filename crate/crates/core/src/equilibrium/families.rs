//! Named equilibrium families selectable at runtime.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use super::couples::{helix_constants, pure_twist_strains};
use super::tensile::{shear_threshold, sheared_constants, sheared_strains, trivial_strains};
use super::{ClosedForm, StatePath};
use crate::constitutive::Strains;
use crate::error::{Error, Result};
use crate::material::Material;

/// Loads and angles a family may read. Unused fields are ignored.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FamilyArgs {
    pub thrust: Option<f64>,
    pub m3: Option<f64>,
    pub m1: Option<f64>,
    pub theta: Option<f64>,
    pub psi0: f64,
}

fn required(value: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    match value {
        Some(x) if x.is_finite() => Ok(x),
        Some(x) => Err(Error::InvalidArgument(format!("{flag} = {x} must be finite"))),
        None => Err(Error::InvalidArgument(format!("family '{family}' needs {flag}"))),
    }
}

pub trait StateFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, mat: &Material, args: &FamilyArgs) -> Result<ClosedForm>;
}

fn path(theta: f64, psi0: f64, psi_rate: f64, couple: [f64; 3], thrust: f64) -> StatePath {
    StatePath {
        theta,
        phi0: 0.0,
        phi_rate: 0.0,
        psi0,
        psi_rate,
        couple,
        thrust,
        strains0: Strains::REFERENCE,
    }
}

pub struct TrivialFamily;

impl StateFamily for TrivialFamily {
    fn name(&self) -> &'static str {
        "trivial"
    }
    fn summary(&self) -> &'static str {
        "straight stretched rod under end thrust (--n-thrust)"
    }
    fn build(&self, mat: &Material, args: &FamilyArgs) -> Result<ClosedForm> {
        let thrust = required(args.thrust, "--n-thrust", self.name())?;
        let strains = trivial_strains(mat, thrust);
        let mut path = path(0.0, args.psi0, strains.u3, [0.0; 3], thrust);
        path.strains0 = strains;
        let mut extras = BTreeMap::new();
        if let Some(nt) = shear_threshold(mat).threshold() {
            extras.insert("shear_threshold".into(), nt);
        }
        Ok(ClosedForm { path, extras })
    }
}

pub struct ShearedFamily;

impl StateFamily for ShearedFamily {
    fn name(&self) -> &'static str {
        "sheared"
    }
    fn summary(&self) -> &'static str {
        "straight sheared rod past the bifurcation threshold (--n-thrust)"
    }
    fn build(&self, mat: &Material, args: &FamilyArgs) -> Result<ClosedForm> {
        let thrust = required(args.thrust, "--n-thrust", self.name())?;
        let c = sheared_constants(mat, thrust)?;
        let mut path = path(c.theta, args.psi0, c.u3, [0.0; 3], thrust);
        path.strains0 = sheared_strains(&c, 0.0, args.psi0);
        let mut extras = BTreeMap::new();
        extras.insert("shear_threshold".into(), shear_threshold(mat).require()?);
        extras.insert("theta".into(), c.theta);
        extras.insert("shear_amplitude".into(), c.shear_amplitude);
        Ok(ClosedForm { path, extras })
    }
}

pub struct TwistFamily;

impl StateFamily for TwistFamily {
    fn name(&self) -> &'static str {
        "twist"
    }
    fn summary(&self) -> &'static str {
        "straight rod under end torque (--m3, optional --theta for the axis)"
    }
    fn build(&self, mat: &Material, args: &FamilyArgs) -> Result<ClosedForm> {
        let m3 = required(args.m3, "--m3", self.name())?;
        let theta = args.theta.unwrap_or(0.0);
        if !theta.is_finite() {
            return Err(Error::InvalidArgument(format!("--theta = {theta} must be finite")));
        }
        let strains = pure_twist_strains(mat, m3);
        let mut path = path(theta, args.psi0, strains.u3, [0.0, 0.0, m3], 0.0);
        path.strains0 = strains;
        Ok(ClosedForm {
            path,
            extras: BTreeMap::new(),
        })
    }
}

fn helix_form(mat: &Material, m1: f64, theta: f64, psi0: f64) -> Result<ClosedForm> {
    let h = helix_constants(mat, m1, theta)?;
    let path = StatePath {
        theta,
        phi0: 0.0,
        phi_rate: h.phi_rate,
        psi0,
        psi_rate: h.psi_rate,
        couple: [m1, 0.0, h.m3],
        thrust: 0.0,
        strains0: h.strains(psi0),
    };
    let mut extras = BTreeMap::new();
    extras.insert("radius".into(), h.radius());
    extras.insert("pitch".into(), h.pitch());
    extras.insert("pitch_per_turn".into(), h.pitch_per_turn());
    Ok(ClosedForm { path, extras })
}

pub struct HelixFamily;

impl StateFamily for HelixFamily {
    fn name(&self) -> &'static str {
        "helix"
    }
    fn summary(&self) -> &'static str {
        "helix under an end couple inclined to its axis (--m1, --theta in (0, pi/2])"
    }
    fn build(&self, mat: &Material, args: &FamilyArgs) -> Result<ClosedForm> {
        let m1 = required(args.m1, "--m1", self.name())?;
        let theta = required(args.theta, "--theta", self.name())?;
        helix_form(mat, m1, theta, args.psi0)
    }
}

pub struct BendingFamily;

impl StateFamily for BendingFamily {
    fn name(&self) -> &'static str {
        "bending"
    }
    fn summary(&self) -> &'static str {
        "planar circle under a bending couple (--m1)"
    }
    fn build(&self, mat: &Material, args: &FamilyArgs) -> Result<ClosedForm> {
        let m1 = required(args.m1, "--m1", self.name())?;
        helix_form(mat, m1, FRAC_PI_2, args.psi0)
    }
}

/// Families by name, in registration order.
pub struct FamilyRegistry {
    families: Vec<Box<dyn StateFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        Self { families: Vec::new() }
    }

    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(TrivialFamily));
        reg.register(Box::new(ShearedFamily));
        reg.register(Box::new(TwistFamily));
        reg.register(Box::new(HelixFamily));
        reg.register(Box::new(BendingFamily));
        reg
    }

    /// Adds a family, replacing any with the same name.
    pub fn register(&mut self, family: Box<dyn StateFamily>) {
        self.families.retain(|f| f.name() != family.name());
        self.families.push(family);
    }

    pub fn get(&self, name: &str) -> Option<&dyn StateFamily> {
        self.families.iter().find(|f| f.name() == name).map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn StateFamily> {
        self.families.iter().map(|f| f.as_ref())
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        Self::standard()
    }
}
