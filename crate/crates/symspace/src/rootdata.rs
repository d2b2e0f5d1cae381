//! Restricted root systems with multiplicities for the catalog spaces
//! (real/complex hyperbolic and SL(n,R)/SO(n)), plus the scalar invariants
//! derived from them: rho, rho_min, the Anker-Ji exponent beta, and the
//! dual-basis interior direction of the Weyl chamber.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for membership in the closed Weyl chamber.
pub const CHAMBER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositiveRoot {
    /// The root as a covector; evaluation on a chamber vector is the dot product.
    pub covector: Vec<f64>,
    /// Dimension of the root space attached to this root.
    pub multiplicity: u32,
}

/// A restricted root system Sigma+ with multiplicities on a flat of dimension
/// `rank`. Covectors are stored in the coordinate space of the flat: 1-tuples
/// for the rank-1 hyperbolic families, ambient trace-zero n-tuples for SLnR.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictedRootSystem {
    pub rank: usize,
    /// Dimension of the symmetric space itself: rank + sum of multiplicities.
    pub dim: usize,
    pub positive_roots: Vec<PositiveRoot>,
    /// Indices into `positive_roots` selecting the base (simple) roots.
    pub base_roots: Vec<usize>,
    /// Half the multiplicity-weighted sum of the positive roots.
    pub rho: Vec<f64>,
    pub name: String,
}

/// An element of the closed Weyl chamber: every positive root evaluates
/// to at least -CHAMBER_TOL on it. Built via [`RestrictedRootSystem::chamber_vector`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ChamberVector {
    coords: Vec<f64>,
}

impl ChamberVector {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean norm; equals the distance to the basepoint for Cartan coordinates.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Builds the root system for one of the catalog labels "H{n}R", "H{n}C",
/// "SL{n}R" (n >= 2). The metric normalization makes the indivisible root of
/// the hyperbolic families have unit length (curvature -1), and uses the
/// Euclidean form on trace-zero diagonal matrices for SLnR.
pub fn catalog_space(name: &str) -> Result<RestrictedRootSystem> {
    let err = || Error::UnknownSpace(name.to_string());
    let rs = if let Some(rest) = name.strip_prefix("SL") {
        let n: usize = rest.strip_suffix('R').ok_or_else(err)?.parse().map_err(|_| err())?;
        if n < 2 {
            return Err(err());
        }
        let mut positive_roots = Vec::new();
        let mut base_roots = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut covector = vec![0.0; n];
                covector[i] = 1.0;
                covector[j] = -1.0;
                if j == i + 1 {
                    base_roots.push(positive_roots.len());
                }
                positive_roots.push(PositiveRoot { covector, multiplicity: 1 });
            }
        }
        let rho = (0..n).map(|k| (n - 1) as f64 / 2.0 - k as f64).collect();
        RestrictedRootSystem {
            rank: n - 1,
            dim: (n - 1) + n * (n - 1) / 2,
            positive_roots,
            base_roots,
            rho,
            name: name.to_string(),
        }
    } else if let Some(rest) = name.strip_prefix('H') {
        let (digits, complex) = if let Some(d) = rest.strip_suffix('R') {
            (d, false)
        } else if let Some(d) = rest.strip_suffix('C') {
            (d, true)
        } else {
            return Err(err());
        };
        let n: usize = digits.parse().map_err(|_| err())?;
        if n < 2 {
            return Err(err());
        }
        let (positive_roots, rho, dim) = if complex {
            (
                vec![
                    PositiveRoot { covector: vec![1.0], multiplicity: 2 * (n as u32 - 1) },
                    PositiveRoot { covector: vec![2.0], multiplicity: 1 },
                ],
                vec![n as f64],
                2 * n,
            )
        } else {
            (
                vec![PositiveRoot { covector: vec![1.0], multiplicity: n as u32 - 1 }],
                vec![(n as f64 - 1.0) / 2.0],
                n,
            )
        };
        RestrictedRootSystem {
            rank: 1,
            dim,
            positive_roots,
            base_roots: vec![0],
            rho,
            name: name.to_string(),
        }
    } else {
        return Err(err());
    };
    rs.validate()?;
    Ok(rs)
}

impl RestrictedRootSystem {
    /// Length of the coordinate tuples used for covectors and chamber vectors.
    pub fn coord_len(&self) -> usize {
        self.rho.len()
    }

    /// Evaluates positive root `i` on raw coordinates.
    pub fn root_value(&self, i: usize, coords: &[f64]) -> f64 {
        dot(&self.positive_roots[i].covector, coords)
    }

    /// Validates raw coordinates as a closed-chamber element.
    pub fn chamber_vector(&self, coords: Vec<f64>) -> Result<ChamberVector> {
        if coords.len() != self.coord_len() {
            return Err(Error::Domain(format!(
                "expected {} coordinates for {}, got {}",
                self.coord_len(),
                self.name,
                coords.len()
            )));
        }
        for (index, root) in self.positive_roots.iter().enumerate() {
            let value = dot(&root.covector, &coords);
            if value < -CHAMBER_TOL {
                return Err(Error::OutsideChamber { index, value });
            }
        }
        Ok(ChamberVector { coords })
    }

    /// rho evaluated on a chamber vector.
    pub fn eval_rho(&self, h: &ChamberVector) -> f64 {
        dot(&self.rho, &h.coords)
    }

    pub fn rho_norm(&self) -> f64 {
        dot(&self.rho, &self.rho).sqrt()
    }

    /// Bottom of the scalar Laplacian spectrum, |rho|^2.
    pub fn scalar_alpha0(&self) -> f64 {
        dot(&self.rho, &self.rho)
    }

    /// Per-root values alpha(h) paired with the multiplicities.
    pub fn root_values(&self, h: &ChamberVector) -> Vec<(f64, u32)> {
        self.positive_roots
            .iter()
            .map(|r| (dot(&r.covector, &h.coords), r.multiplicity))
            .collect()
    }

    /// inf over the closed chamber (minus 0) of rho(h)/|h|. A linear functional
    /// that is nonnegative on a simplicial cone attains this infimum on an
    /// extreme ray, and the extreme rays are exactly the dual-basis vectors,
    /// so the infimum is the minimum over those.
    pub fn rho_min(&self) -> Result<f64> {
        let duals = self.dual_basis()?;
        let mut min = f64::INFINITY;
        for e in &duals {
            let norm = dot(e, e).sqrt();
            if norm <= 0.0 {
                return Err(Error::Structural("degenerate dual basis vector".into()));
            }
            min = min.min(dot(&self.rho, e) / norm);
        }
        Ok(min)
    }

    /// beta = #(indivisible positive roots) + (rank - 1)/2.
    pub fn beta_exponent(&self) -> f64 {
        let indivisible = self
            .positive_roots
            .iter()
            .filter(|r| {
                let half: Vec<f64> = r.covector.iter().map(|c| c / 2.0).collect();
                !self.positive_roots.iter().any(|other| {
                    other
                        .covector
                        .iter()
                        .zip(&half)
                        .all(|(a, b)| (a - b).abs() <= 1e-9)
                })
            })
            .count();
        indivisible as f64 + (self.rank as f64 - 1.0) / 2.0
    }

    /// v = sum of the dual-basis vectors; satisfies alpha(v) >= 1 for every
    /// positive root (each positive root is a nonnegative integer combination
    /// of the base roots, not all coefficients zero).
    pub fn interior_direction(&self) -> Result<ChamberVector> {
        let duals = self.dual_basis()?;
        let mut v = vec![0.0; self.coord_len()];
        for e in &duals {
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi += ei;
            }
        }
        let min_alpha = self
            .positive_roots
            .iter()
            .map(|r| dot(&r.covector, &v))
            .fold(f64::INFINITY, f64::min);
        if min_alpha < 1.0 - CHAMBER_TOL {
            return Err(Error::Structural(format!(
                "interior direction evaluates to {min_alpha} on some root, expected >= 1"
            )));
        }
        self.chamber_vector(v)
    }

    /// Basis (E_j) of the flat dual to the base roots: alpha_i(E_j) = delta_ij.
    /// Computed through the Gram matrix of the base roots, which keeps the
    /// vectors inside the span of the roots (the trace-zero subspace for SLnR).
    pub fn dual_basis(&self) -> Result<Vec<Vec<f64>>> {
        let l = self.rank;
        let base: Vec<&[f64]> = self
            .base_roots
            .iter()
            .map(|&i| self.positive_roots[i].covector.as_slice())
            .collect();
        let gram = DMatrix::from_fn(l, l, |i, j| dot(base[i], base[j]));
        let inv = gram
            .try_inverse()
            .ok_or_else(|| Error::Structural("base-root Gram matrix is singular".into()))?;
        let mut duals = Vec::with_capacity(l);
        for j in 0..l {
            let mut e = vec![0.0; self.coord_len()];
            for k in 0..l {
                let c = inv[(j, k)];
                for (ei, &bk) in e.iter_mut().zip(base[k]) {
                    *ei += c * bk;
                }
            }
            duals.push(e);
        }
        Ok(duals)
    }

    /// Orthonormal basis of the span of the base roots (the coordinate flat),
    /// used for uniform sampling of balls in the flat.
    pub fn flat_basis(&self) -> Result<Vec<Vec<f64>>> {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(self.rank);
        for &i in &self.base_roots {
            let mut v = self.positive_roots[i].covector.clone();
            for b in &basis {
                let proj = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
            let norm = dot(&v, &v).sqrt();
            if norm < 1e-12 {
                return Err(Error::Structural("base roots are linearly dependent".into()));
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// Checks the structural invariants; `catalog_space` runs this on every construction.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Structural(msg));
        if self.rank == 0 || self.positive_roots.is_empty() {
            return fail("empty root system".into());
        }
        if self.rho.len() != self.coord_len() {
            return fail("rho length mismatch".into());
        }
        let mut rho = vec![0.0; self.coord_len()];
        let mut mult_sum = 0usize;
        for root in &self.positive_roots {
            if root.covector.len() != self.coord_len() {
                return fail("covector length mismatch".into());
            }
            mult_sum += root.multiplicity as usize;
            for (ri, ci) in rho.iter_mut().zip(&root.covector) {
                *ri += 0.5 * root.multiplicity as f64 * ci;
            }
        }
        if rho.iter().zip(&self.rho).any(|(a, b)| (a - b).abs() > 1e-12) {
            return fail(format!("stored rho {:?} differs from recomputed {:?}", self.rho, rho));
        }
        if self.dim != self.rank + mult_sum {
            return fail(format!(
                "dim {} != rank {} + total multiplicity {}",
                self.dim, self.rank, mult_sum
            ));
        }
        if self.base_roots.len() != self.rank {
            return fail(format!(
                "{} base roots for rank {}",
                self.base_roots.len(),
                self.rank
            ));
        }
        if self.base_roots.iter().any(|&i| i >= self.positive_roots.len()) {
            return fail("base root index out of range".into());
        }
        // Independence of the base roots, and every positive root a nonnegative
        // integer combination of them: solve the normal equations and check
        // residual and integrality.
        let duals = self.dual_basis()?;
        for root in &self.positive_roots {
            let mut reconstructed = vec![0.0; self.coord_len()];
            for (j, e) in duals.iter().enumerate() {
                let c = dot(&root.covector, e);
                if (c - c.round()).abs() > 1e-9 || c < -1e-9 {
                    return fail(format!(
                        "root {:?} has non-integral or negative coefficient {c} on base root {j}",
                        root.covector
                    ));
                }
                let base = &self.positive_roots[self.base_roots[j]].covector;
                for (ri, bi) in reconstructed.iter_mut().zip(base) {
                    *ri += c.round() * bi;
                }
            }
            if reconstructed
                .iter()
                .zip(&root.covector)
                .any(|(a, b)| (a - b).abs() > 1e-9)
            {
                return fail(format!(
                    "root {:?} is not an integer combination of the base roots",
                    root.covector
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const CATALOG: [&str; 9] = [
        "H2R", "H3R", "H4R", "H7R", "H2C", "H3C", "SL2R", "SL3R", "SL4R",
    ];

    #[test]
    fn catalog_examples() {
        let h3 = catalog_space("H3R").unwrap();
        assert_eq!(h3.rank, 1);
        assert_eq!(h3.dim, 3);
        assert_eq!(h3.positive_roots.len(), 1);
        assert_eq!(h3.positive_roots[0].multiplicity, 2);
        assert_relative_eq!(h3.rho_norm(), 1.0);

        let h2 = catalog_space("H2R").unwrap();
        assert_relative_eq!(h2.rho_norm(), 0.5);
        assert_eq!(h2.dim, 2);

        let h2c = catalog_space("H2C").unwrap();
        assert_eq!(h2c.dim, 4);
        assert_eq!(h2c.positive_roots.len(), 2);
        assert_relative_eq!(h2c.rho_norm(), 2.0);

        let sl3 = catalog_space("SL3R").unwrap();
        assert_eq!(sl3.rank, 2);
        assert_eq!(sl3.dim, 5);
        assert_eq!(sl3.positive_roots.len(), 3);
        assert_eq!(sl3.rho, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn unknown_labels_are_rejected() {
        for bad in ["H1R", "SL1R", "SL3C", "X3", "HR", "H0C", "SLR", "", "h3r"] {
            assert!(matches!(catalog_space(bad), Err(Error::UnknownSpace(_))), "{bad}");
        }
    }

    #[test]
    fn dim_equals_rank_plus_multiplicity_sum() {
        for name in CATALOG {
            let rs = catalog_space(name).unwrap();
            let mult: usize = rs.positive_roots.iter().map(|r| r.multiplicity as usize).sum();
            assert_eq!(rs.dim, rs.rank + mult, "{name}");
            rs.validate().unwrap();
        }
    }

    #[test]
    fn rho_min_values() {
        assert_relative_eq!(catalog_space("H3R").unwrap().rho_min().unwrap(), 1.0);
        assert_relative_eq!(catalog_space("H2R").unwrap().rho_min().unwrap(), 0.5);
        assert_relative_eq!(
            catalog_space("SL3R").unwrap().rho_min().unwrap(),
            3.0 / 6.0_f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn rho_min_agrees_with_grid_search() {
        // brute-force minimization of rho(h)/|h| over a fine angular grid of
        // the chamber, as an independent check of the extreme-ray shortcut
        let rs = catalog_space("SL3R").unwrap();
        let duals = rs.dual_basis().unwrap();
        let expected = rs.rho_min().unwrap();
        let mut grid_min = f64::INFINITY;
        let steps = 2000;
        for i in 0..=steps {
            let c = i as f64 / steps as f64;
            let h: Vec<f64> = duals[0]
                .iter()
                .zip(&duals[1])
                .map(|(a, b)| c * a + (1.0 - c) * b)
                .collect();
            let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
            let value = h.iter().zip(&rs.rho).map(|(a, b)| a * b).sum::<f64>() / norm;
            grid_min = grid_min.min(value);
        }
        assert!((grid_min - expected).abs() < 1e-6);
        assert!(grid_min >= expected - 1e-12);
    }

    #[test]
    fn rho_min_at_most_rho_norm_with_rank1_equality() {
        for name in CATALOG {
            let rs = catalog_space(name).unwrap();
            let rho_min = rs.rho_min().unwrap();
            assert!(rho_min <= rs.rho_norm() + 1e-12, "{name}");
            if rs.rank == 1 {
                assert_relative_eq!(rho_min, rs.rho_norm(), max_relative = 1e-14);
            } else {
                assert!(rho_min < rs.rho_norm() - 1e-9, "{name}");
            }
        }
    }

    #[test]
    fn beta_exponents() {
        assert_relative_eq!(catalog_space("H3R").unwrap().beta_exponent(), 1.0);
        assert_relative_eq!(catalog_space("H2C").unwrap().beta_exponent(), 1.0);
        assert_relative_eq!(catalog_space("SL3R").unwrap().beta_exponent(), 3.5);
        assert_relative_eq!(catalog_space("SL4R").unwrap().beta_exponent(), 7.0);
    }

    #[test]
    fn interior_direction_examples() {
        let sl3 = catalog_space("SL3R").unwrap();
        let v = sl3.interior_direction().unwrap();
        for (want, got) in [1.0, 0.0, -1.0].iter().zip(v.coords()) {
            assert_relative_eq!(got, want, epsilon = 1e-12);
        }
        // roots come in (i, j) order: e1-e2, e1-e3, e2-e3
        let values: Vec<f64> = sl3.root_values(&v).iter().map(|(a, _)| *a).collect();
        assert_relative_eq!(values[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(values[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(values[2], 1.0, epsilon = 1e-12);

        for name in CATALOG {
            let rs = catalog_space(name).unwrap();
            let v = rs.interior_direction().unwrap();
            let min = rs
                .root_values(&v)
                .iter()
                .map(|(a, _)| *a)
                .fold(f64::INFINITY, f64::min);
            assert!(min >= 1.0 - CHAMBER_TOL, "{name}: min alpha(v) = {min}");
        }
    }

    #[test]
    fn eval_rho_examples() {
        let sl3 = catalog_space("SL3R").unwrap();
        let h = sl3.chamber_vector(vec![1.0, 0.0, -1.0]).unwrap();
        assert_relative_eq!(sl3.eval_rho(&h), 2.0);
        let zero = sl3.chamber_vector(vec![0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(sl3.eval_rho(&zero), 0.0);

        let h3 = catalog_space("H3R").unwrap();
        for r in [0.0, 0.5, 2.0, 17.0] {
            let h = h3.chamber_vector(vec![r]).unwrap();
            assert_relative_eq!(h3.eval_rho(&h), r);
        }
    }

    #[test]
    fn rho_cauchy_schwarz_bound() {
        let sl3 = catalog_space("SL3R").unwrap();
        let duals = sl3.dual_basis().unwrap();
        for i in 0..=20 {
            let c = i as f64 / 20.0;
            let coords: Vec<f64> = duals[0]
                .iter()
                .zip(&duals[1])
                .map(|(a, b)| 3.0 * (c * a + (1.0 - c) * b))
                .collect();
            let h = sl3.chamber_vector(coords).unwrap();
            let value = sl3.eval_rho(&h);
            assert!(value >= 0.0);
            assert!(value <= sl3.rho_norm() * h.norm() + 1e-12);
        }
        // equality for h parallel to rho
        let h = sl3.chamber_vector(vec![2.0, 0.0, -2.0]).unwrap();
        assert_relative_eq!(
            sl3.eval_rho(&h),
            sl3.rho_norm() * h.norm(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn chamber_membership_tolerance() {
        let sl3 = catalog_space("SL3R").unwrap();
        assert!(matches!(
            sl3.chamber_vector(vec![0.0, 1.0, -1.0]),
            Err(Error::OutsideChamber { index: 0, .. })
        ));
        // a tiny negative root value within tolerance is accepted
        sl3.chamber_vector(vec![-5e-13, 0.0, 5e-13]).unwrap();
        assert!(sl3.chamber_vector(vec![-1e-11, 0.0, 1e-11]).is_err());
        assert!(sl3.chamber_vector(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let rs = catalog_space("SL3R").unwrap();
        let text = serde_json::to_string(&rs).unwrap();
        let back: RestrictedRootSystem = serde_json::from_str(&text).unwrap();
        back.validate().unwrap();
        assert_eq!(back.rho, rs.rho);
        assert_eq!(back.name, rs.name);
        assert_eq!(back.base_roots, rs.base_roots);
    }

    #[test]
    fn flat_basis_is_orthonormal_and_spans_the_roots() {
        for name in ["H3R", "SL3R", "SL4R"] {
            let rs = catalog_space(name).unwrap();
            let basis = rs.flat_basis().unwrap();
            assert_eq!(basis.len(), rs.rank);
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    let got: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    assert_relative_eq!(got, want, epsilon = 1e-12);
                }
                // trace-zero for the SL families
                if name.starts_with("SL") {
                    let sum: f64 = a.iter().sum();
                    assert_relative_eq!(sum, 0.0, epsilon = 1e-12);
                }
            }
        }
    }
}
