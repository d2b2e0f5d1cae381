//! Volume density J(h) on the flat, the closed-form two-sided envelope for
//! the volume of intersected balls, and a deterministic Monte Carlo
//! quadrature for the exact volume integral.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::{ChamberVector, RestrictedRootSystem};
use crate::special::ball_volume;

/// Envelope for vol KB(x, eps):
/// e^{2 rho(x+)} eps^l prod_alpha ((eps + alpha(x+)) / (1 + alpha(x+)))^m_alpha.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeEnvelope {
    pub value: f64,
    pub x_plus: ChamberVector,
    pub epsilon: f64,
}

/// Monte Carlo estimate of the volume integral with its standard error.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub chamber_hits: u64,
    pub warning: Option<String>,
}

/// Radial volume density J(h) = prod_{alpha} sinh(alpha(h))^{m_alpha}
/// (with the K-orbit constant set to 1); vanishes exactly on chamber walls.
pub fn density_j(rs: &RestrictedRootSystem, h: &ChamberVector) -> f64 {
    raw_density(rs, h.coords())
}

/// Density on raw coordinates with the chamber indicator built in: returns 0
/// outside the closed chamber (used by the Monte Carlo sampler).
fn raw_density(rs: &RestrictedRootSystem, coords: &[f64]) -> f64 {
    let mut j = 1.0;
    for root in &rs.positive_roots {
        let a: f64 = root.covector.iter().zip(coords).map(|(c, h)| c * h).sum();
        if a < 0.0 {
            return 0.0;
        }
        j *= a.sinh().powi(root.multiplicity as i32);
    }
    j
}

pub fn volume_envelope(
    rs: &RestrictedRootSystem,
    x_plus: &ChamberVector,
    epsilon: f64,
) -> Result<VolumeEnvelope> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    let mut value = (2.0 * rs.eval_rho(x_plus)).exp() * epsilon.powi(rs.rank as i32);
    for (a, m) in rs.root_values(x_plus) {
        value *= ((epsilon + a) / (1.0 + a)).powi(m as i32);
    }
    Ok(VolumeEnvelope { value, x_plus: x_plus.clone(), epsilon })
}

const SHARD_SIZE: u64 = 4096;

/// Monte Carlo estimate of Int_{B(x+, eps) cap chamber} J(h) dh by uniform
/// sampling of the ball in the flat (rejection from the bounding cube).
///
/// Sampling is sharded in fixed-size blocks, one RNG stream per shard, and
/// shard results are merged in shard order, so the result depends only on
/// `seed` and `budget` - not on how many threads rayon uses.
pub fn volume_quadrature(
    rs: &RestrictedRootSystem,
    x_plus: &ChamberVector,
    epsilon: f64,
    budget: u64,
    seed: u64,
) -> Result<VolumeEstimate> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if budget < 10_000 {
        return Err(Error::Domain(format!(
            "Monte Carlo budget must be at least 10^4 samples, got {budget}"
        )));
    }
    let l = rs.rank;
    let basis = rs.flat_basis()?;
    let center = x_plus.coords().to_vec();
    let shards = budget.div_ceil(SHARD_SIZE);
    let partials: Vec<(f64, f64, u64)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let quota = SHARD_SIZE.min(budget - shard * SHARD_SIZE);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard + 1);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut hits = 0u64;
            let mut coords = vec![0.0; center.len()];
            let mut cube = vec![0.0; l];
            let mut accepted = 0u64;
            while accepted < quota {
                let mut norm_sq = 0.0;
                for c in cube.iter_mut() {
                    *c = rng.gen_range(-epsilon..epsilon);
                    norm_sq += *c * *c;
                }
                if norm_sq > epsilon * epsilon {
                    continue;
                }
                accepted += 1;
                coords.copy_from_slice(&center);
                for (c, b) in cube.iter().zip(&basis) {
                    for (x, bi) in coords.iter_mut().zip(b) {
                        *x += c * bi;
                    }
                }
                let j = raw_density(rs, &coords);
                if j > 0.0 {
                    hits += 1;
                }
                sum += j;
                sum_sq += j * j;
            }
            (sum, sum_sq, hits)
        })
        .collect();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut hits = 0u64;
    for (s, s2, h) in partials {
        sum += s;
        sum_sq += s2;
        hits += h;
    }
    let n = budget as f64;
    let ball = ball_volume(l, epsilon);
    let mean = sum / n;
    let variance = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    let warning = (hits == 0)
        .then(|| "no samples landed in the open chamber; the estimate is 0".to_string());
    Ok(VolumeEstimate {
        value: ball * mean,
        std_error: ball * (variance / n).sqrt(),
        samples: budget,
        chamber_hits: hits,
        warning,
    })
}
