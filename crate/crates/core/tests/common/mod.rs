//! Random materials, loads and strains shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use strainrod::{Loads, Material, MaterialParams, Strains};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo.log10()..hi.log10()))
}

/// Material with moduli in `[0.2, 5]`, `|iota| < 0.95 beta eta` and `p` in `[p_lo, p_hi]`.
pub fn material(rng: &mut ChaCha8Rng, p_lo: f64, p_hi: f64) -> Material {
    let alpha = log_uniform(rng, 0.2, 5.0);
    let beta = log_uniform(rng, 0.2, 5.0);
    let zeta = log_uniform(rng, 0.2, 5.0);
    let eta = log_uniform(rng, 0.2, 5.0);
    let iota = rng.gen_range(-0.95..0.95) * beta * eta;
    let p = if p_lo == p_hi { p_lo } else { rng.gen_range(p_lo..p_hi) };
    Material::new(MaterialParams::new(alpha, beta, 1.0, zeta, eta, iota, p)).unwrap()
}

/// Uniformly distributed unit vector in R^6.
pub fn direction(rng: &mut ChaCha8Rng) -> [f64; 6] {
    loop {
        let x: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            return x.map(|c| c / norm);
        }
    }
}

pub fn loads(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Loads {
    let scale = log_uniform(rng, lo, hi);
    let d = direction(rng).map(|c| c * scale);
    Loads::new([d[0], d[1], d[2]], [d[3], d[4], d[5]])
}

/// Strain form written out term by term, independent of the library's matrix.
pub fn q_oracle(m: &Material, s: &Strains) -> f64 {
    let dv = s.v3 - 1.0;
    m.alpha().powi(2) * (s.u1 * s.u1 + s.u2 * s.u2)
        + m.beta().powi(2) * s.u3 * s.u3
        + m.zeta().powi(2) * (s.v1 * s.v1 + s.v2 * s.v2)
        + m.eta().powi(2) * dv * dv
        + 2.0 * m.iota() * s.u3 * dv
}

/// Strains along a random direction scaled to `Q = q`.
pub fn strains_with_q(rng: &mut ChaCha8Rng, m: &Material, q: f64) -> Strains {
    let d = direction(rng);
    let unit = Strains::new([d[0], d[1], d[2]], [d[3], d[4], 1.0 + d[5]]);
    let k = (q / q_oracle(m, &unit)).sqrt();
    Strains::new([d[0] * k, d[1] * k, d[2] * k], [d[3] * k, d[4] * k, 1.0 + d[5] * k])
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |a, b| a.max(b.abs()))
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    max_abs(&diff) / max_abs(b).max(f64::MIN_POSITIVE)
}

/// Deviation `(u, v - e3)` as an array.
pub fn deviation(s: &Strains) -> [f64; 6] {
    [s.u1, s.u2, s.u3, s.v1, s.v2, s.v3 - 1.0]
}
