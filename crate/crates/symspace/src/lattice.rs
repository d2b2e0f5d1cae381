//! Orbit enumeration for finitely generated discrete groups acting on the
//! model spaces, the modified Poincare series, and estimators for the
//! critical exponent and its radial shift.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::envelopes::OperatorSpec;
use crate::error::{Error, Result};
use crate::models::{cartan_plus_sl, lorentz_boost, matrix_from_rows, matrix_rows, Model};
use crate::rootdata::{catalog_space, RestrictedRootSystem};

pub const DEFAULT_ORBIT_CAP: usize = 200_000;
pub const DEFAULT_DEDUP_TOL: f64 = 1e-7;

/// One orbit point gamma o: its word length in the generators, the radial
/// distance d(o, gamma o) = |gamma+|, and rho(gamma+).
#[derive(Debug, Clone, Serialize)]
pub struct OrbitSample {
    pub word_length: u32,
    pub dist: f64,
    pub rho_radial: f64,
}

#[derive(Debug, Clone)]
pub struct OrbitEnumeration {
    pub samples: Vec<OrbitSample>,
    pub warnings: Vec<String>,
}

/// A finitely generated subgroup of the isometry group of one of the model
/// spaces, given by matrix generators.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    pub model: Model,
    pub generators: Vec<DMatrix<f64>>,
    pub name: String,
}

#[derive(Deserialize)]
struct LatticeSpecJson {
    model: String,
    generators: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    name: String,
}

impl LatticeSpec {
    pub fn new(model: Model, generators: Vec<DMatrix<f64>>, name: impl Into<String>) -> Result<Self> {
        for g in &generators {
            model.validate_isometry(g)?;
        }
        Ok(LatticeSpec { model, generators, name: name.into() })
    }

    /// Parse `{"model": "H2R", "generators": [[[row], [row], ...], ...],
    /// "name": "..."}`; the model is named by its space label.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: LatticeSpecJson = serde_json::from_str(text)?;
        let model = Model::for_space_label(&raw.model)?;
        let mut generators = Vec::with_capacity(raw.generators.len());
        for rows in &raw.generators {
            generators.push(matrix_from_rows(rows)?);
        }
        LatticeSpec::new(model, generators, raw.name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "model": self.model.space_label(),
            "generators": self.generators.iter().map(matrix_rows).collect::<Vec<_>>(),
            "name": self.name,
        })
    }

    /// The restricted root system of the space the group acts on.
    pub fn root_system(&self) -> Result<RestrictedRootSystem> {
        catalog_space(&self.model.space_label())
    }
}

/// Cyclic group generated by one boost of translation length `length` on H2.
pub fn cyclic_h2(length: f64) -> LatticeSpec {
    LatticeSpec {
        model: Model::Hyperboloid { n: 2 },
        generators: vec![lorentz_boost(2, 1, length)],
        name: format!("cyclic-boost-{length}"),
    }
}

/// Free group generated by boosts of equal length along two perpendicular
/// axes of H2 (Schottky for length large enough).
pub fn schottky_h2(length: f64) -> LatticeSpec {
    LatticeSpec {
        model: Model::Hyperboloid { n: 2 },
        generators: vec![lorentz_boost(2, 1, length), lorentz_boost(2, 2, length)],
        name: format!("schottky-boosts-{length}"),
    }
}

/// Scale-aware index of already-seen group elements. An element is keyed by
/// its Frobenius-normalized entries and log norm, both rounded to the `tol`
/// grid; candidates sharing a key are rechecked within 10 tol so that
/// accidental far collisions stay distinct.
struct ElementIndex {
    tol: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    reps: Vec<(Vec<f64>, f64)>,
}

impl ElementIndex {
    fn new(tol: f64) -> Self {
        ElementIndex { tol, buckets: HashMap::new(), reps: Vec::new() }
    }

    /// Returns true when the element was not seen before.
    fn insert(&mut self, m: &DMatrix<f64>) -> bool {
        let norm = m.norm();
        let scaled: Vec<f64> = m.iter().map(|e| e / norm).collect();
        let ln_norm = norm.ln();
        let mut key: Vec<i64> = scaled.iter().map(|e| (e / self.tol).round() as i64).collect();
        key.push((ln_norm / self.tol).round() as i64);
        let bucket = self.buckets.entry(key).or_default();
        for &idx in bucket.iter() {
            let (entries, rep_ln) = &self.reps[idx];
            let mut sep = (ln_norm - rep_ln).abs();
            for (a, b) in scaled.iter().zip(entries) {
                sep = sep.max((a - b).abs());
            }
            if sep < 10.0 * self.tol {
                return false;
            }
        }
        bucket.push(self.reps.len());
        self.reps.push((scaled, ln_norm));
        true
    }
}

fn orbit_sample(
    rs: &RestrictedRootSystem,
    model: &Model,
    m: &DMatrix<f64>,
    word_length: u32,
) -> Result<OrbitSample> {
    match model {
        Model::Hyperboloid { .. } => {
            let dist = m[(0, 0)].max(1.0).acosh();
            Ok(OrbitSample { word_length, dist, rho_radial: rs.rho_norm() * dist })
        }
        Model::Unimodular { .. } => {
            let coord = cartan_plus_sl(rs, m)?;
            Ok(OrbitSample {
                word_length,
                dist: coord.distance,
                rho_radial: rs.eval_rho(&coord.x_plus),
            })
        }
    }
}

pub fn enumerate_orbit(
    spec: &LatticeSpec,
    max_word_length: u32,
    dedup_tol: f64,
) -> Result<OrbitEnumeration> {
    enumerate_orbit_capped(spec, max_word_length, dedup_tol, DEFAULT_ORBIT_CAP)
}

/// Breadth-first enumeration of distinct orbit elements up to the given word
/// length. Fails with [`Error::OrbitTruncated`] (carrying the partial
/// enumeration) once more than `cap` elements have been collected.
pub fn enumerate_orbit_capped(
    spec: &LatticeSpec,
    max_word_length: u32,
    dedup_tol: f64,
    cap: usize,
) -> Result<OrbitEnumeration> {
    if !(dedup_tol > 0.0 && dedup_tol < 1e-2) {
        return Err(Error::Domain(format!(
            "dedup tolerance must lie in (0, 1e-2), got {dedup_tol}"
        )));
    }
    if max_word_length == 0 {
        return Err(Error::Domain("maximum word length must be at least 1".into()));
    }
    let rs = spec.root_system()?;
    let dim = spec.model.matrix_dim();

    // close the generating set under inverses, dropping duplicates
    let mut gen_index = ElementIndex::new(dedup_tol);
    let mut gens: Vec<DMatrix<f64>> = Vec::new();
    for g in &spec.generators {
        let inv = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Model("generator is not invertible".into()))?;
        for m in [g.clone(), inv] {
            if gen_index.insert(&m) {
                gens.push(m);
            }
        }
    }

    let identity = DMatrix::<f64>::identity(dim, dim);
    let mut index = ElementIndex::new(dedup_tol);
    index.insert(&identity);
    let mut samples = vec![OrbitSample { word_length: 0, dist: 0.0, rho_radial: 0.0 }];
    let mut warnings = Vec::new();
    let mut warned_fixed_point = false;
    let mut frontier = vec![identity];
    for depth in 1..=max_word_length {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let p = m * g;
                if !index.insert(&p) {
                    continue;
                }
                let sample = orbit_sample(&rs, &spec.model, &p, depth)?;
                if sample.dist <= 1e-9 && !warned_fixed_point {
                    warned_fixed_point = true;
                    warnings.push(format!(
                        "non-identity word of length {depth} fixes the basepoint \
                         (distance {:.1e}); torsion is not detected",
                        sample.dist
                    ));
                }
                samples.push(sample);
                if samples.len() > cap {
                    return Err(Error::OrbitTruncated { cap, partial: samples });
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    Ok(OrbitEnumeration { samples, warnings })
}

/// Number of distinct orbit elements found at each word length, indexed by
/// word length starting at 0.
pub fn word_length_histogram(samples: &[OrbitSample]) -> Vec<usize> {
    let depth = samples.iter().map(|s| s.word_length).max().unwrap_or(0) as usize;
    let mut counts = vec![0usize; depth + 1];
    for s in samples {
        counts[s.word_length as usize] += 1;
    }
    counts
}

/// Partial modified Poincare series sum_gamma e^{rho(gamma+) - s d(gamma)}.
/// Overflow saturates to +inf, the divergence sentinel.
pub fn modified_series(samples: &[OrbitSample], s: f64) -> f64 {
    samples.iter().map(|g| (g.rho_radial - s * g.dist).exp()).sum()
}

/// Partial classical Poincare series sum_gamma e^{-s d(gamma)}.
pub fn poincare_series(samples: &[OrbitSample], s: f64) -> f64 {
    samples.iter().map(|g| (-s * g.dist).exp()).sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentDiagnostics {
    /// distinct distance shells after merging at 1e-6
    pub shell_count: usize,
    /// distance range of the regression window that was selected
    pub window_start: f64,
    pub window_end: f64,
    pub window_points: usize,
    /// rms residual of the selected fit of log N(R)
    pub residual_rms: f64,
    /// effective radial rho rate sum rho(gamma+) d / sum d^2
    pub c_eff: f64,
    /// growth rate of the rho-weighted counting function (estimates delta~ + c_eff)
    pub weighted_rate: f64,
    /// where the partial modified series crosses 10^6, by bisection
    pub series_abscissa: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalExponents {
    /// estimated critical exponent delta (growth rate of N(R))
    pub delta: f64,
    /// estimated radial shift delta~ = delta - c_eff
    pub delta_tilde: f64,
    pub diagnostics: ExponentDiagnostics,
}

struct WindowFit {
    slope: f64,
    rms: f64,
    start: usize,
}

/// Least-squares slope of ys vs xs over suffix windows covering at least 40%
/// of the distance span; picks the window with the smallest rms residual,
/// preferring the larger window on ties.
fn suffix_regression(xs: &[f64], ys: &[f64]) -> WindowFit {
    let span = xs[xs.len() - 1] - xs[0];
    let mut best: Option<WindowFit> = None;
    for start in 0..=(xs.len() - 3) {
        if xs[xs.len() - 1] - xs[start] < 0.4 * span {
            break;
        }
        let xw = &xs[start..];
        let yw = &ys[start..];
        let n = xw.len() as f64;
        let mx = xw.iter().sum::<f64>() / n;
        let my = yw.iter().sum::<f64>() / n;
        let sxx: f64 = xw.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xw.iter().zip(yw).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let rms = (xw
            .iter()
            .zip(yw)
            .map(|(x, y)| {
                let r = y - (intercept + slope * x);
                r * r
            })
            .sum::<f64>()
            / n)
            .sqrt();
        if best.as_ref().is_none_or(|b| rms < b.rms) {
            best = Some(WindowFit { slope, rms, start });
        }
    }
    best.expect("at least one suffix window")
}

const SERIES_THRESHOLD: f64 = 1e6;

fn series_abscissa(samples: &[OrbitSample]) -> f64 {
    let mut lo = -50.0;
    let mut hi = 50.0;
    if modified_series(samples, lo) <= SERIES_THRESHOLD {
        return f64::NEG_INFINITY;
    }
    if modified_series(samples, hi) > SERIES_THRESHOLD {
        return f64::INFINITY;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if modified_series(samples, mid) > SERIES_THRESHOLD {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const SHELL_MERGE_TOL: f64 = 1e-6;

/// Estimate the critical exponent delta and the radial shift delta~ from an
/// orbit enumeration.
///
/// delta is the windowed log-linear growth rate of the counting function
/// N(R) = #{gamma : d(gamma) <= R}; the radial rho rate c_eff is the
/// least-squares coefficient of rho(gamma+) against d(gamma); and
/// delta~ = delta - c_eff. Requires word length >= 6 and at least three
/// distance shells.
pub fn critical_exponents(samples: &[OrbitSample]) -> Result<CriticalExponents> {
    let depth = samples.iter().map(|s| s.word_length).max().unwrap_or(0);
    if depth < 6 {
        return Err(Error::Estimation(format!(
            "enumeration depth {depth} is too shallow; need word length >= 6"
        )));
    }
    let mut dists: Vec<f64> = samples.iter().map(|s| s.dist).collect();
    dists.sort_by(f64::total_cmp);
    let mut shells: Vec<(f64, usize)> = Vec::new();
    for d in dists {
        match shells.last_mut() {
            Some((r, count)) if d - *r <= SHELL_MERGE_TOL => *count += 1,
            _ => shells.push((d, 1)),
        }
    }
    if shells.len() < 3 {
        return Err(Error::Estimation(format!(
            "only {} distinct distance shells; need at least 3",
            shells.len()
        )));
    }

    let xs: Vec<f64> = shells.iter().map(|(r, _)| *r).collect();
    let mut cum = 0usize;
    let ys: Vec<f64> = shells
        .iter()
        .map(|(_, c)| {
            cum += c;
            (cum as f64).ln()
        })
        .collect();
    let fit = suffix_regression(&xs, &ys);

    // rho-weighted counting function, same window machinery
    let mut weighted: Vec<(f64, f64)> = samples.iter().map(|s| (s.dist, s.rho_radial)).collect();
    weighted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut wcum = 0.0;
    let mut wxs: Vec<f64> = Vec::new();
    let mut wys: Vec<f64> = Vec::new();
    for (d, rho) in weighted {
        wcum += rho.exp();
        match wxs.last() {
            Some(r) if d - r <= SHELL_MERGE_TOL => {
                *wys.last_mut().unwrap() = wcum.ln();
            }
            _ => {
                wxs.push(d);
                wys.push(wcum.ln());
            }
        }
    }
    let weighted_rate = suffix_regression(&wxs, &wys).slope;

    let sum_rho_d: f64 = samples.iter().map(|s| s.rho_radial * s.dist).sum();
    let sum_d_sq: f64 = samples.iter().map(|s| s.dist * s.dist).sum();
    if sum_d_sq == 0.0 {
        return Err(Error::Estimation(
            "all orbit points sit at the basepoint; no radial information".into(),
        ));
    }
    let c_eff = sum_rho_d / sum_d_sq;
    let delta = fit.slope;

    Ok(CriticalExponents {
        delta,
        delta_tilde: delta - c_eff,
        diagnostics: ExponentDiagnostics {
            shell_count: shells.len(),
            window_start: xs[fit.start],
            window_end: xs[xs.len() - 1],
            window_points: xs.len() - fit.start,
            residual_rms: fit.rms,
            c_eff,
            weighted_rate,
            series_abscissa: series_abscissa(samples),
        },
    })
}

/// Spectral bound lambda0 >= alpha0 - max(delta~, 0)^2.
pub fn lambda0_lower_bound(op: &OperatorSpec, delta_tilde: f64) -> f64 {
    op.alpha0 - delta_tilde.max(0.0).powi(2)
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityCheck {
    /// delta - (rho_min + delta~), nonnegative when the lower inequality holds
    pub lower_margin: f64,
    /// (|rho| + delta~) - delta, nonnegative when the upper inequality holds
    pub upper_margin: f64,
    pub holds: bool,
}

const INEQUALITY_TOL: f64 = 1e-9;

/// Check rho_min + delta~ <= delta <= |rho| + delta~ for an estimated pair.
pub fn exponent_inequality_check(
    rs: &RestrictedRootSystem,
    delta: f64,
    delta_tilde: f64,
) -> Result<InequalityCheck> {
    let lower_margin = delta - rs.rho_min()? - delta_tilde;
    let upper_margin = rs.rho_norm() + delta_tilde - delta;
    Ok(InequalityCheck {
        lower_margin,
        upper_margin,
        holds: lower_margin >= -INEQUALITY_TOL && upper_margin >= -INEQUALITY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dmatrix;

    #[test]
    fn cyclic_orbit_counts_and_distances() {
        let spec = cyclic_h2(1.0);
        let orbit = enumerate_orbit(&spec, 10, DEFAULT_DEDUP_TOL).unwrap();
        assert_eq!(orbit.samples.len(), 21);
        assert!(orbit.warnings.is_empty());
        let hist = word_length_histogram(&orbit.samples);
        assert_eq!(hist[0], 1);
        assert!(hist[1..].iter().all(|&c| c == 2));
        for s in &orbit.samples {
            assert_relative_eq!(s.dist, s.word_length as f64, max_relative = 1e-10);
            assert_relative_eq!(s.rho_radial, 0.5 * s.dist, max_relative = 1e-12);
        }
    }

    #[test]
    fn free_group_counts_at_small_translation_length() {
        let spec = schottky_h2(1.0);
        let orbit = enumerate_orbit(&spec, 3, DEFAULT_DEDUP_TOL).unwrap();
        assert_eq!(orbit.samples.len(), 53);
        assert_eq!(word_length_histogram(&orbit.samples), vec![1, 4, 12, 36]);
    }

    #[test]
    fn schottky_counts_are_free_to_depth_five() {
        let spec = schottky_h2(6.0);
        let orbit = enumerate_orbit(&spec, 5, 1e-8).unwrap();
        assert_eq!(word_length_histogram(&orbit.samples), vec![1, 4, 12, 36, 108, 324]);
    }

    #[test]
    fn identity_only_group() {
        let spec = LatticeSpec::new(Model::Hyperboloid { n: 2 }, vec![], "trivial").unwrap();
        let orbit = enumerate_orbit(&spec, 5, DEFAULT_DEDUP_TOL).unwrap();
        assert_eq!(orbit.samples.len(), 1);
        assert_eq!(orbit.samples[0].dist, 0.0);
        assert_relative_eq!(modified_series(&orbit.samples, 3.0), 1.0);
    }

    #[test]
    fn deeper_enumeration_extends_the_shallow_one() {
        let spec = schottky_h2(1.5);
        let five = enumerate_orbit(&spec, 5, DEFAULT_DEDUP_TOL).unwrap();
        let six = enumerate_orbit(&spec, 6, DEFAULT_DEDUP_TOL).unwrap();
        let h5 = word_length_histogram(&five.samples);
        let h6 = word_length_histogram(&six.samples);
        assert_eq!(h5[..], h6[..6]);
        // distances at each prefix depth agree as multisets
        let mut d5: Vec<f64> = five.samples.iter().map(|s| s.dist).collect();
        let mut d6: Vec<f64> = six
            .samples
            .iter()
            .filter(|s| s.word_length <= 5)
            .map(|s| s.dist)
            .collect();
        d5.sort_by(f64::total_cmp);
        d6.sort_by(f64::total_cmp);
        assert_eq!(d5.len(), d6.len());
        for (a, b) in d5.iter().zip(&d6) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn elliptic_generator_warns_about_basepoint_fixing_words() {
        let theta: f64 = 1.0;
        let rot = dmatrix![
            1.0, 0.0, 0.0;
            0.0, theta.cos(), -theta.sin();
            0.0, theta.sin(), theta.cos();
        ];
        let spec = LatticeSpec::new(Model::Hyperboloid { n: 2 }, vec![rot], "rotation").unwrap();
        let orbit = enumerate_orbit(&spec, 2, DEFAULT_DEDUP_TOL).unwrap();
        assert!(!orbit.warnings.is_empty());
        assert!(orbit.samples.iter().any(|s| s.word_length > 0 && s.dist <= 1e-9));
    }

    #[test]
    fn truncation_returns_the_partial_orbit() {
        let spec = schottky_h2(1.0);
        match enumerate_orbit_capped(&spec, 10, DEFAULT_DEDUP_TOL, 50) {
            Err(Error::OrbitTruncated { cap, partial }) => {
                assert_eq!(cap, 50);
                assert_eq!(partial.len(), 51);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let spec = schottky_h2(2.0);
        let text = spec.to_json().to_string();
        let parsed = LatticeSpec::from_json_str(&text).unwrap();
        assert_eq!(parsed.generators.len(), 2);
        let orbit = enumerate_orbit(&parsed, 3, DEFAULT_DEDUP_TOL).unwrap();
        assert_eq!(orbit.samples.len(), 53);

        let bad = r#"{"model": "H2R", "generators": [[[2, 0, 0], [0, 1, 0], [0, 0, 1]]]}"#;
        assert!(matches!(LatticeSpec::from_json_str(bad), Err(Error::Model(_))));
        let unknown = r#"{"model": "E8", "generators": []}"#;
        assert!(LatticeSpec::from_json_str(unknown).is_err());
    }

    #[test]
    fn modified_series_matches_the_cyclic_closed_form() {
        let spec = cyclic_h2(1.0);
        let orbit = enumerate_orbit(&spec, 30, DEFAULT_DEDUP_TOL).unwrap();
        // rho = 1/2, distances are exactly k: partial sum of the geometric series
        let s = 2.0f64;
        let q: f64 = (0.5 - s).exp();
        let partial: f64 = 1.0 + 2.0 * (1..=30).map(|k| q.powi(k)).sum::<f64>();
        assert_relative_eq!(modified_series(&orbit.samples, s), partial, max_relative = 1e-10);
        // the depth-30 tail of the full series 1 + 2q/(1-q) is ~1e-34 at s = 3
        let q3: f64 = (0.5f64 - 3.0).exp();
        assert_relative_eq!(
            modified_series(&orbit.samples, 3.0),
            1.0 + 2.0 * q3 / (1.0 - q3),
            max_relative = 1e-12
        );
        // monotone decreasing in s
        let mut last = f64::INFINITY;
        for s in [0.6, 1.0, 2.0, 4.0] {
            let v = modified_series(&orbit.samples, s);
            assert!(v < last);
            last = v;
        }
        // poincare series drops the rho weight
        assert!(poincare_series(&orbit.samples, 2.0) < modified_series(&orbit.samples, 2.0));
    }

    #[test]
    fn modified_series_overflows_to_infinity() {
        let spec = cyclic_h2(1.0);
        let orbit = enumerate_orbit(&spec, 200, DEFAULT_DEDUP_TOL).unwrap();
        assert!(modified_series(&orbit.samples, -10.0).is_infinite());
    }

    #[test]
    fn cyclic_exponents_recover_zero_growth() {
        let spec = cyclic_h2(1.0);
        let orbit = enumerate_orbit(&spec, 200, DEFAULT_DEDUP_TOL).unwrap();
        let est = critical_exponents(&orbit.samples).unwrap();
        assert!(est.delta.abs() <= 0.05, "delta = {}", est.delta);
        // rank 1: c_eff = |rho| exactly, so delta~ = delta - 1/2 exactly
        assert_relative_eq!(est.diagnostics.c_eff, 0.5, epsilon = 1e-15);
        assert!((est.delta_tilde - (est.delta - 0.5)).abs() <= 1e-9);
        // lambda0 bound is the full 1/4 since delta~ < 0
        let op = OperatorSpec::new(0.25);
        assert_relative_eq!(lambda0_lower_bound(&op, est.delta_tilde), 0.25);
        // both inequality margins hold
        let rs = spec.root_system().unwrap();
        let check = exponent_inequality_check(&rs, est.delta, est.delta_tilde).unwrap();
        assert!(check.holds, "margins {} / {}", check.lower_margin, check.upper_margin);
        assert!(check.lower_margin >= -1e-9 && check.upper_margin >= -1e-9);
    }

    #[test]
    fn schottky_exponent_tracks_the_free_growth_rate() {
        let spec = schottky_h2(6.0);
        let orbit = enumerate_orbit(&spec, 6, 1e-8).unwrap();
        let est = critical_exponents(&orbit.samples).unwrap();
        // 4 * 3^{k-1} words of length k at translation length ~6k
        let expected = 3.0f64.ln() / 6.0;
        assert!(
            (est.delta - expected).abs() <= 0.25 * expected,
            "delta = {}, expected ~{expected}",
            est.delta
        );
        assert!(est.diagnostics.series_abscissa.is_finite());
    }

    #[test]
    fn unimodular_orbit_respects_cauchy_schwarz() {
        let e12 = dmatrix![1.0, 1.0, 0.0; 0.0, 1.0, 0.0; 0.0, 0.0, 1.0];
        let e23 = dmatrix![1.0, 0.0, 0.0; 0.0, 1.0, 1.0; 0.0, 0.0, 1.0];
        let spec = LatticeSpec::new(Model::Unimodular { n: 3 }, vec![e12, e23], "heisenberg")
            .unwrap();
        let orbit = enumerate_orbit(&spec, 6, DEFAULT_DEDUP_TOL).unwrap();
        let rs = spec.root_system().unwrap();
        // the Heisenberg relations force plenty of dedup below the free count
        assert!(orbit.samples.len() < 1365);
        assert!(orbit.samples.len() > 100);
        for s in &orbit.samples {
            assert!(s.rho_radial <= rs.rho_norm() * s.dist + 1e-9);
        }
        let est = critical_exponents(&orbit.samples).unwrap();
        // c_eff >= rho_min because rho(u) >= rho_min |u| on the chamber
        assert!(est.diagnostics.c_eff >= rs.rho_min().unwrap() - 1e-9);
        assert!(est.delta_tilde <= est.delta - rs.rho_min().unwrap() + 1e-9);
    }

    #[test]
    fn estimator_preconditions() {
        let spec = cyclic_h2(1.0);
        let shallow = enumerate_orbit(&spec, 5, DEFAULT_DEDUP_TOL).unwrap();
        assert!(matches!(
            critical_exponents(&shallow.samples),
            Err(Error::Estimation(_))
        ));
        let degenerate = vec![
            OrbitSample { word_length: 0, dist: 0.0, rho_radial: 0.0 },
            OrbitSample { word_length: 6, dist: 0.0, rho_radial: 0.0 },
        ];
        assert!(matches!(critical_exponents(&degenerate), Err(Error::Estimation(_))));
    }

    #[test]
    fn lambda0_examples() {
        assert_relative_eq!(lambda0_lower_bound(&OperatorSpec::new(0.25), -0.5), 0.25);
        assert_relative_eq!(lambda0_lower_bound(&OperatorSpec::new(0.25), 0.3), 0.16);
        assert_relative_eq!(lambda0_lower_bound(&OperatorSpec::new(1.0), 0.0), 1.0);
    }

    #[test]
    fn inequality_margins() {
        let h2 = catalog_space("H2R").unwrap();
        let check = exponent_inequality_check(&h2, 0.3, -0.2).unwrap();
        assert_relative_eq!(check.lower_margin, 0.0, epsilon = 1e-15);
        assert_relative_eq!(check.upper_margin, 0.0, epsilon = 1e-15);
        assert!(check.holds);

        let sl3 = catalog_space("SL3R").unwrap();
        let rho = sl3.rho_norm();
        let check = exponent_inequality_check(&sl3, 1.0, 1.0 - rho).unwrap();
        assert_relative_eq!(check.upper_margin, 0.0, epsilon = 1e-12);
        assert_relative_eq!(
            check.lower_margin,
            rho - sl3.rho_min().unwrap(),
            epsilon = 1e-12
        );
        assert!(check.holds);

        let failing = exponent_inequality_check(&sl3, 0.3, 0.0).unwrap();
        assert!(!failing.holds);
        assert!(failing.lower_margin < 0.0);
    }

    #[test]
    fn dedup_tolerance_validation() {
        let spec = cyclic_h2(1.0);
        assert!(enumerate_orbit(&spec, 3, 0.0).is_err());
        assert!(enumerate_orbit(&spec, 3, 0.5).is_err());
        assert!(enumerate_orbit(&spec, 0, 1e-7).is_err());
    }
}
