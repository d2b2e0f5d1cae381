use symspace::catalog_space;

use crate::report::{Cell, Table};
use crate::{CliError, RunConfig};

/// Representative slice of the H{n}R / H{n}C / SL{n}R catalog families.
pub const CATALOG: [&str; 9] = [
    "H2R", "H3R", "H4R", "H5R", "H2C", "H3C", "SL2R", "SL3R", "SL4R",
];

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let mut table = Table::new(vec![
        "space", "rank", "dim", "rho_norm", "beta", "rho_min",
    ]);
    println!(
        "{:<6} {:>4} {:>4} {:>10} {:>6} {:>10}",
        "space", "rank", "dim", "|rho|", "beta", "rho_min"
    );
    for label in CATALOG {
        let rs = catalog_space(label).map_err(CliError::computation)?;
        let rho_min = rs.rho_min().map_err(CliError::computation)?;
        println!(
            "{:<6} {:>4} {:>4} {:>10.6} {:>6.1} {:>10.6}",
            label,
            rs.rank,
            rs.dim,
            rs.rho_norm(),
            rs.beta_exponent(),
            rho_min
        );
        table.push(vec![
            Cell::from(label),
            Cell::Int(rs.rank as i64),
            Cell::Int(rs.dim as i64),
            Cell::Float(rs.rho_norm()),
            Cell::Float(rs.beta_exponent()),
            Cell::Float(rho_min),
        ]);
    }
    if let Some(out) = &cfg.out {
        crate::report::write_text(&table.to_csv()?, Some(out))?;
    }
    Ok(())
}
