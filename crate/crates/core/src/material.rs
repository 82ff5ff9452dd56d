//! Material constants of the strain-limiting rod and their admissibility checks.
//!
//! The model has seven constants: `alpha`, `beta`, `iota` scale like length,
//! `gamma` like force, `zeta`, `eta`, `p` are dimensionless. Every downstream
//! computation works in the gauge `ref_length = gamma = 1`; [`Material`] is the
//! validated, normalized form that the rest of the crate consumes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_ref_length() -> f64 {
    1.0
}

/// Raw material constants as read from a parameter file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub zeta: f64,
    pub eta: f64,
    pub iota: f64,
    pub p: f64,
    #[serde(default = "default_ref_length")]
    pub ref_length: f64,
}

/// Small-strain moduli read off the linearized constitutive relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedModuli {
    pub bending: f64,
    pub twisting: f64,
    pub shearing: f64,
    pub dilatational: f64,
    pub twist_stretch: f64,
}

impl MaterialParams {
    /// Parameters with `ref_length = 1`.
    pub fn new(alpha: f64, beta: f64, gamma: f64, zeta: f64, eta: f64, iota: f64, p: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            zeta,
            eta,
            iota,
            p,
            ref_length: 1.0,
        }
    }

    /// `beta^2 eta^2 - iota^2`, the determinant of the twist/stretch block of Q.
    pub fn coupling_determinant(&self) -> f64 {
        self.beta * self.beta * self.eta * self.eta - self.iota * self.iota
    }

    pub fn validate(self) -> Result<Self> {
        let named = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("zeta", self.zeta),
            ("eta", self.eta),
            ("iota", self.iota),
            ("p", self.p),
            ("ref_length", self.ref_length),
        ];
        for (name, value) in named {
            if !value.is_finite() {
                return Err(Error::NonFiniteParameter(name));
            }
            if name != "iota" && value <= 0.0 {
                return Err(Error::NonPositiveParameter(name));
            }
        }
        let det = self.coupling_determinant();
        if det <= 0.0 {
            return Err(Error::DefinitenessViolation(det));
        }
        Ok(self)
    }

    /// Rescales lengths by `ref_length` and forces by `gamma`.
    pub fn nondimensionalize(&self) -> Self {
        let l = self.ref_length;
        Self {
            alpha: self.alpha / l,
            beta: self.beta / l,
            gamma: 1.0,
            zeta: self.zeta,
            eta: self.eta,
            iota: self.iota / l,
            p: self.p,
            ref_length: 1.0,
        }
    }

    pub fn derived_moduli(&self) -> DerivedModuli {
        let g = self.gamma;
        DerivedModuli {
            bending: g * self.alpha * self.alpha,
            twisting: g * self.beta * self.beta,
            shearing: g * self.zeta * self.zeta,
            dilatational: g * self.eta * self.eta,
            twist_stretch: g * self.iota,
        }
    }

    /// `1 + iota^2 / beta^2 < eta^2`: every admissible state has `v3 > 0`.
    pub fn orientation_weak_ok(&self) -> bool {
        1.0 + (self.iota * self.iota) / (self.beta * self.beta) < self.eta * self.eta
    }

    /// `a < alpha (1 - beta / sqrt(beta^2 eta^2 - iota^2))`: the slender body with
    /// circular sections of radius `a` never inverts.
    ///
    /// `cross_section_radius` is in the same length unit as `alpha`.
    pub fn orientation_strong_ok(&self, cross_section_radius: f64) -> bool {
        let det = self.coupling_determinant();
        if !(det > 0.0) || !(cross_section_radius > 0.0) {
            return false;
        }
        cross_section_radius < self.alpha * (1.0 - self.beta / det.sqrt())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let params: MaterialParams =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("parameter file: {e}")))?;
        Ok(params)
    }

    /// Reads a parameter file. The result is parsed but not yet validated.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

/// Validated material constants in the `ref_length = gamma = 1` gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    params: MaterialParams,
    det: f64,
}

impl Material {
    pub fn new(params: MaterialParams) -> Result<Self> {
        let params = params.validate()?.nondimensionalize();
        // Rescaling can underflow or overflow for extreme inputs.
        let params = params.validate()?;
        Ok(Self {
            params,
            det: params.coupling_determinant(),
        })
    }

    pub fn params(&self) -> &MaterialParams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }
    pub fn beta(&self) -> f64 {
        self.params.beta
    }
    pub fn zeta(&self) -> f64 {
        self.params.zeta
    }
    pub fn eta(&self) -> f64 {
        self.params.eta
    }
    pub fn iota(&self) -> f64 {
        self.params.iota
    }
    pub fn p(&self) -> f64 {
        self.params.p
    }

    /// `beta^2 eta^2 - iota^2`, always positive.
    pub fn det(&self) -> f64 {
        self.det
    }
}
