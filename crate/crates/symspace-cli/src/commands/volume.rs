use symspace::{volume_envelope, volume_quadrature};

use crate::commands::{coordinate_at, space_for, unit_direction, x_plus_cells, x_plus_columns};
use crate::report::{write_text, Cell, Table};
use crate::{CliError, RunConfig};

const DEFAULT_R: [f64; 5] = [0.0, 1.0, 2.0, 4.0, 6.0];
const DEFAULT_BUDGET: u64 = 100_000;
const MIN_BUDGET: u64 = 10_000;

/// Compares the ball-volume envelope against Monte-Carlo quadrature of the
/// density over the (x+, epsilon) grid.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let rs = space_for(cfg)?;
    let unit = unit_direction(&rs, cfg)?;
    let r_grid = cfg.r_grid(&DEFAULT_R)?;
    let eps_grid = cfg.epsilon_grid()?;
    let seed = cfg.seed.ok_or_else(|| {
        CliError::Usage(
            "the volume command uses Monte-Carlo sampling; provide --seed or `seed` in the config"
                .into(),
        )
    })?;
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    if budget < MIN_BUDGET {
        return Err(CliError::Usage(format!(
            "budget must be at least {MIN_BUDGET} samples, got {budget}"
        )));
    }

    let mut columns: Vec<String> = vec!["space".into()];
    columns.extend(x_plus_columns(&rs));
    columns.extend(
        ["epsilon", "envelope", "quadrature", "std_error", "ratio"].map(String::from),
    );
    let mut table = Table::new(columns);

    for &r in &r_grid {
        let coord = coordinate_at(&rs, &unit, r)?;
        for &eps in &eps_grid {
            let env = volume_envelope(&rs, &coord.x_plus, eps).map_err(CliError::computation)?;
            let est = volume_quadrature(&rs, &coord.x_plus, eps, budget, seed)
                .map_err(CliError::computation)?;
            if let Some(w) = &est.warning {
                eprintln!("warning: r = {r}, epsilon = {eps}: {w}");
            }
            let mut row = vec![Cell::from(rs.name.as_str())];
            row.extend(x_plus_cells(&coord.x_plus));
            row.extend([
                Cell::Float(eps),
                Cell::Float(env.value),
                Cell::Float(est.value),
                Cell::Float(est.std_error),
                Cell::Float(est.value / env.value),
            ]);
            table.push(row);
        }
    }
    write_text(&table.to_csv()?, cfg.out.as_deref())
}
