use symspace::models::CartanCoordinate;
use symspace::rootdata::RestrictedRootSystem;
use symspace::{catalog_space, ChamberVector};

use crate::report::Cell;
use crate::{CliError, RunConfig};

pub mod envelope;
pub mod lattice;
pub mod spaces;
pub mod validate;
pub mod volume;

/// Catalog labels are user input, so a bad one is a usage error.
pub fn space_for(cfg: &RunConfig) -> Result<RestrictedRootSystem, CliError> {
    catalog_space(cfg.space()).map_err(|e| CliError::Usage(e.to_string()))
}

/// Unit chamber direction: the configured one, or the interior direction.
pub fn unit_direction(
    rs: &RestrictedRootSystem,
    cfg: &RunConfig,
) -> Result<Vec<f64>, CliError> {
    let raw = match &cfg.direction {
        Some(d) => {
            let v = rs
                .chamber_vector(d.clone())
                .map_err(|e| CliError::Usage(format!("direction: {e}")))?;
            v.coords().to_vec()
        }
        None => rs
            .interior_direction()
            .map_err(CliError::computation)?
            .coords()
            .to_vec(),
    };
    let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm <= 0.0 {
        return Err(CliError::Usage("direction must be nonzero".into()));
    }
    Ok(raw.iter().map(|c| c / norm).collect())
}

/// x+ = r * unit, with |x+| = r by construction.
pub fn coordinate_at(
    rs: &RestrictedRootSystem,
    unit: &[f64],
    r: f64,
) -> Result<CartanCoordinate, CliError> {
    let coords: Vec<f64> = unit.iter().map(|c| c * r).collect();
    let x_plus = rs
        .chamber_vector(coords)
        .map_err(CliError::computation)?;
    Ok(CartanCoordinate { x_plus, distance: r })
}

/// Column headers x_plus_0 .. x_plus_{k-1} for the flat coordinates.
pub fn x_plus_columns(rs: &RestrictedRootSystem) -> Vec<String> {
    (0..rs.coord_len())
        .map(|i| format!("x_plus_{i}"))
        .collect()
}

pub fn x_plus_cells(x_plus: &ChamberVector) -> Vec<Cell> {
    x_plus.coords().iter().map(|&c| Cell::Float(c)).collect()
}
