//! Concrete matrix models of the catalog spaces: the upper-sheet hyperboloid
//! in Minkowski space for H{n}R, and unimodular-matrix cosets for SL{n}R.
//! Provides Cartan radial coordinates (x+, distance) and point-to-point
//! distances in both models.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rootdata::{ChamberVector, RestrictedRootSystem};

/// Distances below this are reported as exactly 0.
pub const DISTANCE_FLOOR: f64 = 1e-12;

/// Tolerance for membership checks on the model manifolds and isometry groups.
pub const MODEL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Upper sheet of x0^2 - x1^2 - ... - xn^2 = 1 in R^{1,n}; n is the space dimension.
    Hyperboloid { n: usize },
    /// Cosets gK with det g = 1; n is the matrix size.
    Unimodular { n: usize },
}

impl Model {
    /// The matrix model backing a catalog space label ("H{n}R" or "SL{n}R").
    pub fn for_space_label(label: &str) -> Result<Model> {
        if let Some(rest) = label.strip_prefix("SL") {
            if let Some(n) = rest.strip_suffix('R').and_then(|d| d.parse::<usize>().ok()) {
                if n >= 2 {
                    return Ok(Model::Unimodular { n });
                }
            }
        } else if let Some(rest) = label.strip_prefix('H') {
            if let Some(n) = rest.strip_suffix('R').and_then(|d| d.parse::<usize>().ok()) {
                if n >= 2 {
                    return Ok(Model::Hyperboloid { n });
                }
            }
        }
        Err(Error::Model(format!("no matrix model for space label `{label}`")))
    }

    pub fn for_space(rs: &RestrictedRootSystem) -> Result<Model> {
        Self::for_space_label(&rs.name)
    }

    /// The catalog label of the space this model realizes.
    pub fn space_label(&self) -> String {
        match self {
            Model::Hyperboloid { n } => format!("H{n}R"),
            Model::Unimodular { n } => format!("SL{n}R"),
        }
    }

    /// Size of the matrices representing isometries in this model.
    pub fn matrix_dim(&self) -> usize {
        match self {
            Model::Hyperboloid { n } => n + 1,
            Model::Unimodular { n } => *n,
        }
    }

    pub fn basepoint(&self) -> SpacePoint {
        match self {
            Model::Hyperboloid { n } => {
                let mut v = DVector::zeros(n + 1);
                v[0] = 1.0;
                SpacePoint::Hyperboloid(v)
            }
            Model::Unimodular { n } => SpacePoint::UnimodularCoset(DMatrix::identity(*n, *n)),
        }
    }

    /// Checks that `m` is an isometry of the model: orthochronous Lorentz for
    /// the hyperboloid, determinant one for the unimodular model.
    pub fn validate_isometry(&self, m: &DMatrix<f64>) -> Result<()> {
        let dim = self.matrix_dim();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Model(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        match self {
            Model::Hyperboloid { .. } => {
                // m^T eta m = eta with eta = diag(1, -1, ..., -1)
                for i in 0..dim {
                    for j in i..dim {
                        let mut entry = m[(0, i)] * m[(0, j)];
                        for k in 1..dim {
                            entry -= m[(k, i)] * m[(k, j)];
                        }
                        let eta = if i != j {
                            0.0
                        } else if i == 0 {
                            1.0
                        } else {
                            -1.0
                        };
                        if (entry - eta).abs() > MODEL_TOL {
                            return Err(Error::Model(format!(
                                "not a Lorentz matrix: (m^T eta m)[{i},{j}] = {entry:.12}"
                            )));
                        }
                    }
                }
                if m[(0, 0)] <= 0.0 {
                    return Err(Error::Model("Lorentz matrix is not orthochronous".into()));
                }
                Ok(())
            }
            Model::Unimodular { .. } => {
                let det = m.determinant();
                if (det - 1.0).abs() > MODEL_TOL {
                    return Err(Error::Model(format!("determinant {det:.12} is not 1")));
                }
                Ok(())
            }
        }
    }

    /// Applies the isometry `g` to a point of this model.
    pub fn apply(&self, g: &DMatrix<f64>, x: &SpacePoint) -> Result<SpacePoint> {
        match (self, x) {
            (Model::Hyperboloid { n }, SpacePoint::Hyperboloid(v)) => {
                if g.ncols() != n + 1 || v.len() != n + 1 {
                    return Err(Error::Model("dimension mismatch in apply".into()));
                }
                Ok(SpacePoint::Hyperboloid(g * v))
            }
            (Model::Unimodular { n }, SpacePoint::UnimodularCoset(m)) => {
                if g.ncols() != *n || m.nrows() != *n {
                    return Err(Error::Model("dimension mismatch in apply".into()));
                }
                Ok(SpacePoint::UnimodularCoset(g * m))
            }
            _ => Err(Error::Model("point does not belong to this model".into())),
        }
    }
}

/// A point of a concrete model; see [`Model`] for the two variants.
#[derive(Debug, Clone, PartialEq)]
pub enum SpacePoint {
    Hyperboloid(DVector<f64>),
    UnimodularCoset(DMatrix<f64>),
}

impl SpacePoint {
    pub fn hyperboloid(coords: Vec<f64>) -> Result<SpacePoint> {
        let v = DVector::from_vec(coords);
        let q = minkowski(&v, &v);
        if (q - 1.0).abs() > MODEL_TOL {
            return Err(Error::Model(format!("Minkowski norm {q:.12} is not 1")));
        }
        if v[0] < 1.0 - MODEL_TOL {
            return Err(Error::Model(format!("x0 = {} is not on the upper sheet", v[0])));
        }
        Ok(SpacePoint::Hyperboloid(v))
    }

    pub fn unimodular(rows: Vec<Vec<f64>>) -> Result<SpacePoint> {
        let m = matrix_from_rows(&rows)?;
        let det = m.determinant();
        if (det - 1.0).abs() > MODEL_TOL {
            return Err(Error::Model(format!("determinant {det:.12} is not 1")));
        }
        Ok(SpacePoint::UnimodularCoset(m))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SpacePoint::Hyperboloid(v) => serde_json::json!({
                "model": "hyperboloid",
                "data": v.iter().copied().collect::<Vec<f64>>(),
            }),
            SpacePoint::UnimodularCoset(m) => serde_json::json!({
                "model": "unimodular-coset",
                "data": matrix_rows(m),
            }),
        }
    }

    pub fn from_json(value: &serde_json::Value) -> Result<SpacePoint> {
        let model = value
            .get("model")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Model("point JSON lacks a `model` label".into()))?;
        let data = value
            .get("data")
            .ok_or_else(|| Error::Model("point JSON lacks `data`".into()))?;
        match model {
            "hyperboloid" => {
                let coords: Vec<f64> = serde_json::from_value(data.clone())?;
                SpacePoint::hyperboloid(coords)
            }
            "unimodular-coset" => {
                let rows: Vec<Vec<f64>> = serde_json::from_value(data.clone())?;
                SpacePoint::unimodular(rows)
            }
            other => Err(Error::Model(format!("unknown point model `{other}`"))),
        }
    }
}

/// Radial Cartan coordinate of a point: x+ in the closed chamber together
/// with the distance to the basepoint, which equals |x+|.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CartanCoordinate {
    pub x_plus: ChamberVector,
    pub distance: f64,
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Model("matrix rows must form a square matrix".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub(crate) fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn minkowski(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let mut q = x[0] * y[0];
    for i in 1..x.len() {
        q -= x[i] * y[i];
    }
    q
}

/// Sorted-descending logarithms of the singular values of `g`, obtained from
/// the symmetric eigendecomposition of g^T g with eigenvalues clamped at
/// 1e-300 before the logarithm.
fn log_singular_values(g: &DMatrix<f64>) -> Vec<f64> {
    let gram = g.transpose() * g;
    let eigen = nalgebra::SymmetricEigen::new(gram);
    let mut logs: Vec<f64> = eigen
        .eigenvalues
        .iter()
        .map(|&l| 0.5 * l.max(1e-300).ln())
        .collect();
    logs.sort_by(|a, b| b.total_cmp(a));
    logs
}

fn floor_distance(d: f64) -> f64 {
    if d < DISTANCE_FLOOR {
        0.0
    } else {
        d
    }
}

/// Cartan radial coordinate of a unimodular coset: sorted log singular values
/// of the representative, recentered to sum exactly to zero.
pub fn cartan_plus_sl(rs: &RestrictedRootSystem, g: &DMatrix<f64>) -> Result<CartanCoordinate> {
    let n = rs.coord_len();
    if !rs.name.starts_with("SL") {
        return Err(Error::Domain(format!(
            "cartan_plus_sl needs an SL-family root system, got {}",
            rs.name
        )));
    }
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::Model(format!(
            "expected a {n}x{n} matrix for {}, got {}x{}",
            rs.name,
            g.nrows(),
            g.ncols()
        )));
    }
    let det = g.determinant();
    if (det - 1.0).abs() > MODEL_TOL {
        return Err(Error::Model(format!("determinant {det:.12} is not 1")));
    }
    let mut logs = log_singular_values(g);
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    for v in logs.iter_mut() {
        *v -= mean;
    }
    let x_plus = rs.chamber_vector(logs)?;
    let distance = floor_distance(x_plus.norm());
    Ok(CartanCoordinate { x_plus, distance })
}

/// Cartan radial coordinate of an upper-sheet hyperboloid point:
/// distance arccosh(x0) times the unit chamber generator.
pub fn cartan_plus_hyperbolic(
    rs: &RestrictedRootSystem,
    x: &SpacePoint,
) -> Result<CartanCoordinate> {
    if rs.rank != 1 {
        return Err(Error::Domain(format!(
            "cartan_plus_hyperbolic needs a rank-1 root system, got {}",
            rs.name
        )));
    }
    let v = match x {
        SpacePoint::Hyperboloid(v) => v,
        _ => return Err(Error::Model("expected a hyperboloid point".into())),
    };
    if v[0] < 1.0 - MODEL_TOL {
        return Err(Error::Model(format!("x0 = {} is below the upper sheet", v[0])));
    }
    let distance = floor_distance(v[0].max(1.0).acosh());
    let x_plus = rs.chamber_vector(vec![distance])?;
    Ok(CartanCoordinate { x_plus, distance })
}

/// Dispatches on the point variant.
pub fn cartan_plus(rs: &RestrictedRootSystem, x: &SpacePoint) -> Result<CartanCoordinate> {
    match x {
        SpacePoint::Hyperboloid(_) => cartan_plus_hyperbolic(rs, x),
        SpacePoint::UnimodularCoset(m) => cartan_plus_sl(rs, m),
    }
}

/// Distance between two points of the same model.
pub fn distance(x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    match (x, y) {
        (SpacePoint::Hyperboloid(a), SpacePoint::Hyperboloid(b)) => {
            if a.len() != b.len() {
                return Err(Error::Model("hyperboloid dimension mismatch".into()));
            }
            Ok(floor_distance(minkowski(a, b).max(1.0).acosh()))
        }
        (SpacePoint::UnimodularCoset(a), SpacePoint::UnimodularCoset(b)) => {
            if a.nrows() != b.nrows() {
                return Err(Error::Model("matrix dimension mismatch".into()));
            }
            let rel = a
                .clone()
                .lu()
                .solve(b)
                .ok_or_else(|| Error::Model("coset representative is not invertible".into()))?;
            let logs = log_singular_values(&rel);
            Ok(floor_distance(
                logs.iter().map(|v| v * v).sum::<f64>().sqrt(),
            ))
        }
        _ => Err(Error::Model("points belong to different models".into())),
    }
}

/// Haar-like random special orthogonal matrix from the QR factorization of a
/// Gaussian matrix, with the sign convention fixed so the result is a
/// deterministic function of the generator state.
pub fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let gauss = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gauss.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, n - 1)] = -q[(i, n - 1)];
        }
    }
    q
}

/// Lorentz boost of rapidity `length` along spatial axis `axis` (1-based)
/// acting on R^{1,n}.
pub fn lorentz_boost(n: usize, axis: usize, length: f64) -> DMatrix<f64> {
    assert!(axis >= 1 && axis <= n, "spatial axis out of range");
    let mut m = DMatrix::identity(n + 1, n + 1);
    m[(0, 0)] = length.cosh();
    m[(0, axis)] = length.sinh();
    m[(axis, 0)] = length.sinh();
    m[(axis, axis)] = length.cosh();
    m
}

fn embed_rotation(n: usize, r: &DMatrix<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::identity(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            m[(i + 1, j + 1)] = r[(i, j)];
        }
    }
    m
}

/// Deterministic pseudo-random isometry of the model: rotation * bounded
/// boost * rotation for the hyperboloid, orthogonal * bounded-diagonal *
/// orthogonal for the unimodular model.
pub fn random_isometry(model: Model, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match model {
        Model::Hyperboloid { n } => {
            let r1 = embed_rotation(n, &random_rotation(n, &mut rng));
            let r2 = embed_rotation(n, &random_rotation(n, &mut rng));
            let boost = lorentz_boost(n, 1, rng.gen_range(0.1..2.5));
            r1 * boost * r2
        }
        Model::Unimodular { n } => {
            let q1 = random_rotation(n, &mut rng);
            let q2 = random_rotation(n, &mut rng);
            let mut exponents: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mean = exponents.iter().sum::<f64>() / n as f64;
            for e in exponents.iter_mut() {
                *e -= mean;
            }
            let d = DMatrix::from_fn(n, n, |i, j| if i == j { exponents[i].exp() } else { 0.0 });
            q1 * d * q2
        }
    }
}
