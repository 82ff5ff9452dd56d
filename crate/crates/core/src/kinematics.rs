//! Director frames, Euler angles, and sampled rod configurations.
//!
//! The fixed basis is `{g1, g2, g3}`. Euler angles `(phi, theta, psi)` place
//! `d3` by spherical coordinates and then rotate `d1, d2` by `psi` inside the
//! auxiliary basis `{e1, e2, e3}` with `e3 = d3`, `e2 = -sin(phi) g1 + cos(phi) g2`.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::constitutive::{self, Loads, Strains};
use crate::error::{Error, Result};
use crate::material::Material;

pub type Vec3 = Vector3<f64>;

/// Tolerance on `|d_i . d_j - delta_ij|` for a frame to count as orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl EulerAngles {
    pub fn new(phi: f64, theta: f64, psi: f64) -> Self {
        Self { phi, theta, psi }
    }
}

/// Arclength derivatives `(phi', theta', psi')`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AngleRates {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

/// A right-handed orthonormal director triad expressed in `{g_k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

impl Frame {
    pub fn identity() -> Self {
        Self {
            d1: Vec3::x(),
            d2: Vec3::y(),
            d3: Vec3::z(),
        }
    }

    pub fn directors(&self) -> [Vec3; 3] {
        [self.d1, self.d2, self.d3]
    }

    /// Largest of `|d_i . d_j - delta_ij|` and `|d3 - d1 x d2|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let d = self.directors();
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d[i].dot(&d[j]) - target).abs());
            }
        }
        worst.max((self.d1.cross(&self.d2) - self.d3).amax())
    }

    /// Modified Gram–Schmidt on `(d1, d2)`, then `d3 = d1 x d2`.
    pub fn reorthonormalized(&self) -> Self {
        let d1 = self.d1.normalize();
        let d2 = (self.d2 - d1 * d1.dot(&self.d2)).normalize();
        Self {
            d1,
            d2,
            d3: d1.cross(&d2),
        }
    }

    /// Components of a fixed-basis vector in this frame.
    pub fn components(&self, x: &Vec3) -> [f64; 3] {
        [self.d1.dot(x), self.d2.dot(x), self.d3.dot(x)]
    }

    /// `x_k d_k`.
    pub fn combine(&self, x: [f64; 3]) -> Vec3 {
        self.d1 * x[0] + self.d2 * x[1] + self.d3 * x[2]
    }
}

/// The auxiliary basis `{e1, e2, e3}` of the Euler-angle chart.
pub fn auxiliary_basis(phi: f64, theta: f64) -> [Vec3; 3] {
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let e3 = Vec3::new(st * cp, st * sp, ct);
    let e2 = Vec3::new(-sp, cp, 0.0);
    let e1 = Vec3::new(ct * cp, ct * sp, -st);
    [e1, e2, e3]
}

pub fn directors_from_euler(angles: &EulerAngles) -> Frame {
    let [e1, e2, e3] = auxiliary_basis(angles.phi, angles.theta);
    let (s, c) = angles.psi.sin_cos();
    Frame {
        d1: e1 * c + e2 * s,
        d2: -e1 * s + e2 * c,
        d3: e3,
    }
}

/// Darboux components from Euler angles and their rates; `v` is passed through.
pub fn strains_from_euler(angles: &EulerAngles, rates: &AngleRates, v: [f64; 3]) -> Strains {
    let (sp, cp) = angles.psi.sin_cos();
    let (st, ct) = angles.theta.sin_cos();
    Strains::new(
        [
            rates.theta * sp - rates.phi * st * cp,
            rates.theta * cp + rates.phi * st * sp,
            rates.psi + rates.phi * ct,
        ],
        v,
    )
}

/// Couple and force components in the auxiliary basis `{e_k}` for the
/// end-thrust family `n = N g3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameLoads {
    pub m: [f64; 3],
    pub n: [f64; 3],
    pub thrust: f64,
}

pub fn frame_loads(loads: &Loads, angles: &EulerAngles, thrust: f64) -> FrameLoads {
    let (s, c) = angles.psi.sin_cos();
    let (st, ct) = angles.theta.sin_cos();
    FrameLoads {
        m: [loads.m1 * c - loads.m2 * s, loads.m1 * s + loads.m2 * c, loads.m3],
        n: [-thrust * st, 0.0, thrust * ct],
        thrust,
    }
}

/// Director-frame loads for couple components `M_k` in `{e_k}` and `n = N g3`.
pub fn director_loads(frame_loads: &FrameLoads, angles: &EulerAngles) -> Loads {
    let (s, c) = angles.psi.sin_cos();
    let st = angles.theta.sin();
    let [m1e, m2e, m3e] = frame_loads.m;
    let n = frame_loads.thrust;
    Loads::new(
        [m1e * c + m2e * s, -m1e * s + m2e * c, m3e],
        [-n * st * c, n * st * s, n * angles.theta.cos()],
    )
}

/// `(u, v)` with `u_mu = u m_mu`, `v_mu = v n_mu`.
pub fn shear_factors(mat: &Material, loads: &Loads) -> (f64, f64) {
    let f = constitutive::compliance_factor(mat, constitutive::quad_form_qstar(mat, loads));
    (f / mat.alpha().powi(2), f / mat.zeta().powi(2))
}

/// Residuals of the six reduced equilibrium equations in Euler-angle form:
///
/// ```text
/// sin(theta) phi' + u M1
/// theta' - u M2
/// psi' + cos(theta) phi' - u3
/// M1' - M2 cos(theta) phi' + theta' M3
/// M2' + (M1 cos(theta) + M3 sin(theta)) phi' - N v3 sin(theta) + N^2 v cos(theta) sin(theta)
/// M3'
/// ```
///
/// `u3`, `v3` and the shear factors come from the constitutive law applied to
/// the director-frame loads.
pub fn reduced_residual(
    mat: &Material,
    angles: &EulerAngles,
    rates: &AngleRates,
    loads: &FrameLoads,
    load_rates: [f64; 3],
) -> [f64; 6] {
    let director = director_loads(loads, angles);
    let strains = constitutive::strains_from_loads(mat, &director);
    let (u, v) = shear_factors(mat, &director);
    let (st, ct) = angles.theta.sin_cos();
    let [m1, m2, m3] = loads.m;
    let n = loads.thrust;
    [
        st * rates.phi + u * m1,
        rates.theta - u * m2,
        rates.psi + ct * rates.phi - strains.u3,
        load_rates[0] - m2 * ct * rates.phi + rates.theta * m3,
        load_rates[1] + (m1 * ct + m3 * st) * rates.phi - n * strains.v3 * st + n * n * v * ct * st,
        load_rates[2],
    ]
}

/// One sample of a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub s: f64,
    pub r: Vec3,
    pub frame: Frame,
}

/// Centerline and directors sampled on the uniform grid `s_i = i h`, `h = 1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    samples: Vec<Sample>,
    h: f64,
}

/// Number of uniform intervals on `[0, 1]` closest to spacing `h`.
pub fn interval_count(h: f64) -> Result<usize> {
    if !(h > 0.0 && h <= 0.1) {
        return Err(Error::InvalidArgument(format!(
            "grid spacing h = {h} must lie in (0, 0.1]"
        )));
    }
    Ok((1.0 / h).round().max(1.0) as usize)
}

/// Derivative of a sampled field at index `i`: central in the interior,
/// one-sided second order at the ends.
pub fn sampled_derivative<T>(values: &[T], h: f64, i: usize) -> T
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let n = values.len();
    assert!(n >= 3, "need at least three samples");
    if i == 0 {
        (values[1] * 4.0 - values[0] * 3.0 - values[2]) * (0.5 / h)
    } else if i == n - 1 {
        (values[n - 1] * 3.0 - values[n - 2] * 4.0 + values[n - 3]) * (0.5 / h)
    } else {
        (values[i + 1] - values[i - 1]) * (0.5 / h)
    }
}

impl Configuration {
    /// Builds a configuration from samples at `s_i = i / (len - 1)`.
    pub fn from_samples(samples: Vec<Sample>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidArgument(
                "a configuration needs at least 3 samples".into(),
            ));
        }
        let h = 1.0 / (samples.len() - 1) as f64;
        for (i, sample) in samples.iter().enumerate() {
            let expected = i as f64 * h;
            if (sample.s - expected).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "sample {i} has s = {} but the uniform grid needs {expected}",
                    sample.s
                )));
            }
            let defect = sample.frame.orthonormality_defect();
            if !(defect <= ORTHONORMAL_TOL) {
                return Err(Error::NonOrthonormalFrame(defect));
            }
        }
        Ok(Self { samples, h })
    }

    /// Samples `f(s)` on the grid nearest to spacing `h`.
    pub fn sample_with<F: Fn(f64) -> (Vec3, Frame)>(h: f64, f: F) -> Result<Self> {
        let n = interval_count(h)?;
        let samples = (0..=n)
            .map(|i| {
                let s = i as f64 / n as f64;
                let (r, frame) = f(s);
                Sample { s, r, frame }
            })
            .collect();
        Self::from_samples(samples)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Darboux components `(u . d_k)` at sample `i` from `u = 1/2 sum_k d_k x d_k'`.
    pub fn darboux(&self, i: usize) -> [f64; 3] {
        let (_, j) = self.window_index(i);
        let window = self.window(i);
        let frame = self.samples[i].frame;
        let mut u = Vec3::zeros();
        for (k, dk) in frame.directors().iter().enumerate() {
            let field: Vec<Vec3> = window.iter().map(|s| s.frame.directors()[k]).collect();
            u += dk.cross(&sampled_derivative(&field, self.h, j));
        }
        frame.components(&(u * 0.5))
    }

    /// Tangent components `v_k = r' . d_k` at sample `i`.
    pub fn tangent_components(&self, i: usize) -> [f64; 3] {
        let field: Vec<Vec3> = self.window(i).iter().map(|s| s.r).collect();
        let (_, j) = self.window_index(i);
        self.samples[i].frame.components(&sampled_derivative(&field, self.h, j))
    }

    /// Finite-difference strains at every sample.
    pub fn strains(&self) -> Vec<Strains> {
        (0..self.len())
            .map(|i| Strains::new(self.darboux(i), self.tangent_components(i)))
            .collect()
    }

    // Three consecutive samples used by the difference stencil at `i`.
    fn window(&self, i: usize) -> &[Sample] {
        let (start, _) = self.window_index(i);
        &self.samples[start..start + 3]
    }

    fn window_index(&self, i: usize) -> (usize, usize) {
        let n = self.samples.len();
        if i == 0 {
            (0, 0)
        } else if i == n - 1 {
            (n - 3, 2)
        } else {
            (i - 1, 1)
        }
    }

    /// Serializes as CSV with header `s,rx,ry,rz,d1x,...,d3z`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for sample in &self.samples {
            let f = &sample.frame;
            let values = [
                sample.s, sample.r.x, sample.r.y, sample.r.z, f.d1.x, f.d1.y, f.d1.z, f.d2.x, f.d2.y, f.d2.z, f.d3.x,
                f.d3.y, f.d3.z,
            ];
            let row: Vec<String> = values.iter().map(|v| format_number(*v)).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty configuration CSV".into()))?;
        if header.trim() != CSV_HEADER {
            return Err(Error::Parse(format!("unexpected CSV header `{header}`")));
        }
        let mut samples = Vec::new();
        for (row, line) in lines.enumerate() {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
            if fields.len() != 13 || fields.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("row {} must hold 13 finite numbers", row + 1)));
            }
            let v = |k: usize| Vec3::new(fields[k], fields[k + 1], fields[k + 2]);
            samples.push(Sample {
                s: fields[0],
                r: v(1),
                frame: Frame {
                    d1: v(4),
                    d2: v(7),
                    d3: v(10),
                },
            });
        }
        Self::from_samples(samples).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::Parse(msg),
            other => other,
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv(&text)
    }
}

pub const CSV_HEADER: &str = "s,rx,ry,rz,d1x,d1y,d1z,d2x,d2y,d2z,d3x,d3y,d3z";

/// Round-trip-safe decimal with 17 significant digits.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[derive(Clone, Copy)]
struct RodState {
    r: Vec3,
    d: [Vec3; 3],
}

impl RodState {
    fn axpy(&self, k: &RodState, a: f64) -> RodState {
        RodState {
            r: self.r + k.r * a,
            d: [self.d[0] + k.d[0] * a, self.d[1] + k.d[1] * a, self.d[2] + k.d[2] * a],
        }
    }
}

fn rod_rhs(state: &RodState, strains: &Strains) -> RodState {
    let [d1, d2, d3] = state.d;
    let u = d1 * strains.u1 + d2 * strains.u2 + d3 * strains.u3;
    RodState {
        r: d1 * strains.v1 + d2 * strains.v2 + d3 * strains.v3,
        d: [u.cross(&d1), u.cross(&d2), u.cross(&d3)],
    }
}

/// Integrates `d_k' = u x d_k`, `r' = v_k d_k` on `[0, 1]` with classical RK4,
/// re-orthonormalizing the frame after every step.
pub fn reconstruct<F>(strain_field: F, r0: Vec3, frame0: Frame, h: f64) -> Result<Configuration>
where
    F: Fn(f64) -> Strains,
{
    let defect = frame0.orthonormality_defect();
    if !(defect <= ORTHONORMAL_TOL) {
        return Err(Error::NonOrthonormalFrame(defect));
    }
    let n = interval_count(h)?;
    let h = 1.0 / n as f64;
    let mut state = RodState {
        r: r0,
        d: frame0.directors(),
    };
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(Sample {
        s: 0.0,
        r: r0,
        frame: frame0,
    });
    for i in 0..n {
        let s = i as f64 * h;
        let mid = strain_field(s + 0.5 * h);
        let k1 = rod_rhs(&state, &strain_field(s));
        let k2 = rod_rhs(&state.axpy(&k1, 0.5 * h), &mid);
        let k3 = rod_rhs(&state.axpy(&k2, 0.5 * h), &mid);
        let k4 = rod_rhs(&state.axpy(&k3, h), &strain_field(s + h));
        let mut next = state;
        next.r += (k1.r + k2.r * 2.0 + k3.r * 2.0 + k4.r) * (h / 6.0);
        for k in 0..3 {
            next.d[k] += (k1.d[k] + k2.d[k] * 2.0 + k3.d[k] * 2.0 + k4.d[k]) * (h / 6.0);
        }
        let frame = Frame {
            d1: next.d[0],
            d2: next.d[1],
            d3: next.d[2],
        }
        .reorthonormalized();
        next.d = frame.directors();
        state = next;
        samples.push(Sample {
            s: (i + 1) as f64 * h,
            r: state.r,
            frame,
        });
    }
    Configuration::from_samples(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::MaterialParams;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn assert_vec(a: Vec3, b: Vec3, tol: f64) {
        assert!((a - b).amax() < tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn euler_identity_and_quarter_turn() {
        let f = directors_from_euler(&EulerAngles::new(0.0, 0.0, 0.0));
        assert_eq!(f, Frame::identity());

        let f = directors_from_euler(&EulerAngles::new(0.0, FRAC_PI_2, 0.0));
        assert_vec(f.d3, Vec3::x(), 1e-16);
        assert_vec(auxiliary_basis(0.0, FRAC_PI_2)[0], -Vec3::z(), 1e-16);
        assert_vec(f.d1, -Vec3::z(), 1e-16);
        assert_vec(f.d2, Vec3::y(), 1e-16);
    }

    #[test]
    fn euler_matches_printed_sheared_directors() {
        let (theta, psi) = (0.7, -1.3);
        let f = directors_from_euler(&EulerAngles::new(0.0, theta, psi));
        let (st, ct) = f64::sin_cos(theta);
        let (sp, cp) = f64::sin_cos(psi);
        assert_vec(f.d3, Vec3::new(st, 0.0, ct), 1e-15);
        assert_vec(f.d1, Vec3::new(ct * cp, sp, -st * cp), 1e-15);
        assert_vec(f.d2, Vec3::new(-ct * sp, cp, st * sp), 1e-15);
    }

    #[test]
    fn strains_from_euler_examples() {
        let a = EulerAngles::new(0.3, 1.1, -0.4);
        let s = strains_from_euler(&a, &AngleRates::default(), [0.0, 0.0, 1.0]);
        assert_eq!(s.u(), [0.0; 3]);
        let s = strains_from_euler(
            &a,
            &AngleRates {
                phi: 0.0,
                theta: 0.0,
                psi: 2.5,
            },
            [0.1, 0.2, 1.3],
        );
        assert_eq!(s.u(), [0.0, 0.0, 2.5]);
        assert_eq!(s.v(), [0.1, 0.2, 1.3]);
        let s = strains_from_euler(
            &EulerAngles::new(0.0, FRAC_PI_2, 0.0),
            &AngleRates {
                phi: 2.0,
                theta: 0.0,
                psi: 0.0,
            },
            [0.0, 0.0, 1.0],
        );
        assert!((s.u1 + 2.0).abs() < 1e-15 && s.u2.abs() < 1e-15 && s.u3.abs() < 1e-15);
    }

    #[test]
    fn frame_loads_examples() {
        let l = Loads::new([1.0, 2.0, 3.0], [0.0; 3]);
        let fl = frame_loads(&l, &EulerAngles::new(0.0, 0.0, 0.0), 0.0);
        assert_eq!(fl.m, [1.0, 2.0, 3.0]);
        let fl = frame_loads(
            &Loads::new([1.0, 0.0, 0.0], [0.0; 3]),
            &EulerAngles::new(0.0, 0.0, FRAC_PI_2),
            0.0,
        );
        assert!(fl.m[0].abs() < 1e-16 && (fl.m[1] - 1.0).abs() < 1e-16 && fl.m[2] == 0.0);
        let fl = frame_loads(&Loads::ZERO, &EulerAngles::new(0.0, FRAC_PI_3, 0.0), 2.0);
        assert!((fl.n[0] + 3f64.sqrt()).abs() < 1e-15 && fl.n[1] == 0.0 && (fl.n[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn director_loads_inverts_frame_rotation() {
        let a = EulerAngles::new(0.4, 0.9, 2.2);
        let fl = FrameLoads {
            m: [0.3, -1.2, 0.7],
            n: [0.0; 3],
            thrust: 1.7,
        };
        let l = director_loads(&fl, &a);
        let back = frame_loads(&l, &a, 1.7);
        for k in 0..3 {
            assert!((back.m[k] - fl.m[k]).abs() < 1e-15);
        }
        // n = N g3 expressed in the director frame
        let frame = directors_from_euler(&a);
        assert_vec(frame.combine(l.n()), Vec3::z() * 1.7, 1e-15);
    }

    #[test]
    fn shear_factor_examples() {
        let m = Material::new(MaterialParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 2.0)).unwrap();
        assert_eq!(shear_factors(&m, &Loads::ZERO), (1.0, 1.0));
        let m = Material::new(MaterialParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.0, 2.0)).unwrap();
        // Q* = 3 from m1 alone
        let (u, v) = shear_factors(&m, &Loads::new([3f64.sqrt(), 0.0, 0.0], [0.0; 3]));
        assert!((u - 0.5).abs() < 1e-15 && (v - 0.125).abs() < 1e-15);
    }

    #[test]
    fn shear_factors_reproduce_forward_map() {
        let m = Material::new(MaterialParams::new(0.8, 1.1, 1.0, 1.4, 2.0, 0.3, 3.0)).unwrap();
        let l = Loads::new([0.3, -2.0, 0.5], [1.5, 0.2, -0.7]);
        let (u, v) = shear_factors(&m, &l);
        let s = constitutive::strains_from_loads(&m, &l);
        assert!((u * l.m1 - s.u1).abs() < 1e-15 && (u * l.m2 - s.u2).abs() < 1e-15);
        assert!((v * l.n1 - s.v1).abs() < 1e-15 && (v * l.n2 - s.v2).abs() < 1e-15);
    }

    #[test]
    fn reduced_residual_vanishes_on_unloaded_rod() {
        let m = Material::new(MaterialParams::new(1.0, 1.0, 1.0, 1.0, 2.0, 0.5, 2.0)).unwrap();
        let r = reduced_residual(
            &m,
            &EulerAngles::new(0.0, 0.0, 0.0),
            &AngleRates::default(),
            &FrameLoads {
                m: [0.0; 3],
                n: [0.0; 3],
                thrust: 0.0,
            },
            [0.0; 3],
        );
        assert_eq!(r, [0.0; 6]);
    }

    #[test]
    fn kinematic_residuals_follow_from_strain_angle_relations() {
        // Choose rates so that u_mu = u m_mu holds; the first three residuals must vanish.
        let m = Material::new(MaterialParams::new(0.9, 1.2, 1.0, 1.3, 2.1, 0.4, 1.5)).unwrap();
        let a = EulerAngles::new(0.2, 0.8, -0.6);
        let fl = FrameLoads {
            m: [0.7, -0.4, 0.9],
            n: [0.0; 3],
            thrust: 0.5,
        };
        let l = director_loads(&fl, &a);
        let s = constitutive::strains_from_loads(&m, &l);
        let (u, _) = shear_factors(&m, &l);
        let rates = AngleRates {
            phi: -u * fl.m[0] / a.theta.sin(),
            theta: u * fl.m[1],
            psi: s.u3 + u * fl.m[0] / a.theta.sin() * a.theta.cos(),
        };
        let r = reduced_residual(&m, &a, &rates, &fl, [0.0; 3]);
        assert!(r[0].abs() < 1e-15 && r[1].abs() < 1e-15 && r[2].abs() < 1e-15, "{r:?}");
        let from_angles = strains_from_euler(&a, &rates, s.v());
        assert!((from_angles.u1 - s.u1).abs() < 1e-14);
        assert!((from_angles.u2 - s.u2).abs() < 1e-14);
        assert!((from_angles.u3 - s.u3).abs() < 1e-14);
    }

    #[test]
    fn reconstruct_straight_and_twisted() {
        let c = reconstruct(|_| Strains::REFERENCE, Vec3::zeros(), Frame::identity(), 0.01).unwrap();
        for s in c.samples() {
            assert_vec(s.r, Vec3::new(0.0, 0.0, s.s), 1e-14);
            assert_vec(s.frame.d1, Vec3::x(), 1e-14);
        }
        let twist = 3.0;
        let c = reconstruct(
            |_| Strains::new([0.0, 0.0, twist], [0.0, 0.0, 1.0]),
            Vec3::zeros(),
            Frame::identity(),
            0.01,
        )
        .unwrap();
        for s in c.samples() {
            assert_vec(s.r, Vec3::new(0.0, 0.0, s.s), 1e-12);
            let (sn, cs) = (twist * s.s).sin_cos();
            assert_vec(s.frame.d1, Vec3::new(cs, sn, 0.0), 1e-7);
        }
    }

    #[test]
    fn reconstruct_is_fourth_order() {
        let field = |s: f64| Strains::new([0.8 * s, -0.5, 2.0], [0.1, 0.0, 1.1]);
        let endpoint = |h: f64| {
            let c = reconstruct(field, Vec3::zeros(), Frame::identity(), h).unwrap();
            let last = *c.samples().last().unwrap();
            (last.r, last.frame.d1)
        };
        let (r_ref, d_ref) = endpoint(1.0 / 1600.0);
        let err = |h: f64| {
            let (r, d) = endpoint(h);
            (r - r_ref).amax().max((d - d_ref).amax())
        };
        let order = (err(0.02) / err(0.01)).log2();
        assert!(order > 3.8, "observed order {order}");
    }

    #[test]
    fn darboux_examples() {
        let c = Configuration::sample_with(0.01, |s| (Vec3::new(0.0, 0.0, s), Frame::identity())).unwrap();
        for i in 0..c.len() {
            assert_eq!(c.darboux(i), [0.0; 3]);
        }
        let omega = 2.0;
        for h in [0.01, 0.005] {
            let c = Configuration::sample_with(h, |s| {
                (
                    Vec3::new(0.0, 0.0, s),
                    directors_from_euler(&EulerAngles::new(0.0, 0.0, omega * s)),
                )
            })
            .unwrap();
            let u = c.darboux(c.len() / 2);
            // central difference of a rotation at rate w gives sin(w h)/h
            assert!((u[2] - (omega * h).sin() / h).abs() < 1e-10);
            assert!((u[2] - omega).abs() < omega.powi(3) * h * h);
        }
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let c = reconstruct(
            |s| Strains::new([0.3, -0.2, 1.0 + s], [0.1, 0.0, 1.2]),
            Vec3::new(0.5, -1.0, 2.0),
            directors_from_euler(&EulerAngles::new(0.3, 0.4, 0.5)),
            0.05,
        )
        .unwrap();
        let text = c.to_csv();
        let back = Configuration::from_csv(&text).unwrap();
        assert_eq!(back, c);
        let truncated: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(matches!(Configuration::from_csv(&truncated), Err(Error::Parse(_))));
        let bad = text.replacen("s,rx", "t,rx", 1);
        assert!(matches!(Configuration::from_csv(&bad), Err(Error::Parse(_))));
        let short_row = text
            .lines()
            .map(|l| l.rsplit_once(',').map_or(l, |x| x.0))
            .collect::<Vec<_>>()
            .join("\n");
        assert!(Configuration::from_csv(&short_row).is_err());
    }

    #[test]
    fn non_orthonormal_frames_rejected() {
        let skew = Frame {
            d1: Vec3::x(),
            d2: Vec3::new(0.1, 1.0, 0.0),
            d3: Vec3::z(),
        };
        assert!(matches!(
            reconstruct(|_| Strains::REFERENCE, Vec3::zeros(), skew, 0.1),
            Err(Error::NonOrthonormalFrame(_))
        ));
        assert!(interval_count(0.2).is_err());
        assert!(interval_count(0.0).is_err());
    }
}
