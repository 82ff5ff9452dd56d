//! Finite-difference check of the balance laws on a sampled configuration.

use serde::{Deserialize, Serialize};

use crate::constitutive::{self, Loads};
use crate::error::{Error, Result};
use crate::kinematics::{sampled_derivative, Configuration, Vec3};
use crate::material::Material;

/// Largest residuals, away from the two end samples, of `n' + f = 0` and `m' + r' x n + l = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub force: f64,
    pub moment: f64,
    pub h: f64,
    /// Largest director-frame load component over the rod.
    pub max_load: f64,
}

impl BalanceReport {
    /// `1e-6 (1 + max load) (h / 1e-4)^2`, never tighter than at `h = 1e-4`.
    pub fn tolerance(&self) -> f64 {
        balance_tolerance(self.h, self.max_load)
    }

    pub fn passes(&self) -> bool {
        self.force < self.tolerance() && self.moment < self.tolerance()
    }
}

pub fn balance_tolerance(h: f64, max_load: f64) -> f64 {
    1e-6 * (1.0 + max_load) * (h / 1e-4).powi(2).max(1.0)
}

// Max-norm that reports NaN components as infinite.
fn magnitude(x: &Vec3) -> f64 {
    if x.iter().all(|c| c.is_finite()) {
        x.amax()
    } else {
        f64::INFINITY
    }
}

fn no_load(_: f64) -> Vec3 {
    Vec3::zeros()
}

/// Recovers strains by differencing the configuration, loads from the
/// constitutive law, then differences the global loads again.
///
/// Fails with `StrainOutOfRange` when the recovered strains leave the
/// admissible set.
pub fn check_balance(
    mat: &Material,
    config: &Configuration,
    body_force: Option<&dyn Fn(f64) -> Vec3>,
    body_couple: Option<&dyn Fn(f64) -> Vec3>,
) -> Result<BalanceReport> {
    let loads = config
        .strains()
        .iter()
        .map(|s| constitutive::loads_from_strains(mat, s))
        .collect::<Result<Vec<_>>>()?;
    check_balance_with_loads(config, &loads, body_force, body_couple)
}

/// Same as [`check_balance`] with the director-frame loads supplied.
pub fn check_balance_with_loads(
    config: &Configuration,
    loads: &[Loads],
    body_force: Option<&dyn Fn(f64) -> Vec3>,
    body_couple: Option<&dyn Fn(f64) -> Vec3>,
) -> Result<BalanceReport> {
    if loads.len() != config.len() {
        return Err(Error::InvalidArgument(format!(
            "{} load samples for {} configuration samples",
            loads.len(),
            config.len()
        )));
    }
    let f = body_force.unwrap_or(&no_load);
    let l = body_couple.unwrap_or(&no_load);
    let h = config.h();
    let samples = config.samples();
    let r: Vec<Vec3> = samples.iter().map(|s| s.r).collect();
    let n: Vec<Vec3> = samples.iter().zip(loads).map(|(s, y)| s.frame.combine(y.n())).collect();
    let m: Vec<Vec3> = samples.iter().zip(loads).map(|(s, y)| s.frame.combine(y.m())).collect();
    if samples.len() < 5 {
        return Err(Error::InvalidArgument(
            "the balance check needs at least 5 samples".into(),
        ));
    }
    let (mut force, mut moment) = (0.0_f64, 0.0_f64);
    // Skip the samples whose stencil reaches a one-sided endpoint difference.
    for i in 2..samples.len() - 2 {
        let s = samples[i].s;
        let fr = sampled_derivative(&n, h, i) + f(s);
        let mr = sampled_derivative(&m, h, i) + sampled_derivative(&r, h, i).cross(&n[i]) + l(s);
        force = force.max(magnitude(&fr));
        moment = moment.max(magnitude(&mr));
    }
    let max_load = loads.iter().map(Loads::max_abs).fold(0.0, f64::max);
    Ok(BalanceReport {
        force,
        moment,
        h,
        max_load,
    })
}
