use symspace::envelopes::{
    log_green_envelope_unchecked, log_heat_envelope_unchecked, HYPOTHESIS_MIN_DISTANCE,
};
use symspace::{OperatorSpec, SpectralParameter};

use crate::commands::{coordinate_at, space_for, unit_direction, x_plus_cells, x_plus_columns};
use crate::report::{write_text, Cell, Table};
use crate::{CliError, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Green,
    Heat,
}

const DEFAULT_R: [f64; 6] = [2.0, 3.0, 4.0, 6.0, 8.0, 10.0];

/// Tabulates the Green or heat envelope over the (r, s) or (r, t) grid.
/// Rows below the d >= 2 validity hypothesis either fail the run or, with
/// `allow_short_distance`, are evaluated anyway and marked `out_of_theorem`.
pub fn run(cfg: &RunConfig, kind: Kind) -> Result<(), CliError> {
    let rs = space_for(cfg)?;
    let unit = unit_direction(&rs, cfg)?;
    let r_grid = cfg.r_grid(&DEFAULT_R)?;
    let allow_short = cfg.allow_short_distance.unwrap_or(false);
    let op = match cfg.alpha0 {
        Some(a) => OperatorSpec::new(a),
        None => OperatorSpec::scalar(&rs),
    };

    let mut columns: Vec<String> = vec!["space".into()];
    columns.extend(x_plus_columns(&rs));
    columns.extend(["d", "t_or_s", "value", "branch", "flag"].map(String::from));
    let mut table = Table::new(columns);

    let params = match kind {
        Kind::Green => cfg.s_grid()?,
        Kind::Heat => cfg.t_grid()?,
    };
    for &r in &r_grid {
        let coord = coordinate_at(&rs, &unit, r)?;
        let flag = if coord.distance >= HYPOTHESIS_MIN_DISTANCE {
            "ok"
        } else if allow_short {
            "out_of_theorem"
        } else {
            return Err(CliError::Usage(format!(
                "r = {r} violates the envelope hypothesis d >= 2; \
                 set `allow_short_distance` in the config to evaluate anyway"
            )));
        };
        for &p in &params {
            let (log_value, branch) = match kind {
                Kind::Green => {
                    let s = SpectralParameter::real(p).map_err(CliError::computation)?;
                    (log_green_envelope_unchecked(&rs, &coord, &s), "-".to_string())
                }
                Kind::Heat => {
                    let (log, branch) = log_heat_envelope_unchecked(&rs, &coord, p, &op);
                    (log, branch.to_string())
                }
            };
            let mut row = vec![Cell::from(rs.name.as_str())];
            row.extend(x_plus_cells(&coord.x_plus));
            row.extend([
                Cell::Float(coord.distance),
                Cell::Float(p),
                Cell::Float(log_value.exp()),
                Cell::Text(branch),
                Cell::from(flag),
            ]);
            table.push(row);
        }
    }
    write_text(&table.to_csv()?, cfg.out.as_deref())
}
