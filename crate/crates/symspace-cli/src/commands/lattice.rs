use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use symspace::lattice::{DEFAULT_DEDUP_TOL, DEFAULT_ORBIT_CAP};
use symspace::{
    critical_exponents, enumerate_orbit_capped, exponent_inequality_check, lambda0_lower_bound,
    InequalityCheck, LatticeSpec, OperatorSpec,
};

use crate::report::{fmt_float, Cell, Table};
use crate::{CliError, RunConfig};

const DEFAULT_MAX_WORD_LENGTH: u32 = 8;

#[derive(Serialize)]
struct LatticeReport<'a> {
    delta: f64,
    delta_tilde: f64,
    lambda0_lower: f64,
    inequality_margins: &'a InequalityCheck,
    samples_csv_path: String,
}

/// Enumerates the orbit of the configured group, estimates the critical
/// exponents, and writes a JSON report plus a CSV of the orbit samples.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg.lattice_path.as_deref().ok_or_else(|| {
        CliError::Usage(
            "the lattice command needs `lattice_path` in the config, pointing at a \
             group file {\"model\": label, \"generators\": [[[row], ...], ...]}"
                .into(),
        )
    })?;
    let out = cfg.out.clone().ok_or_else(|| {
        CliError::Usage("the lattice command needs --out for the JSON report".into())
    })?;
    let spec = load_spec(path)?;
    let rs = spec.root_system().map_err(|e| CliError::Usage(e.to_string()))?;

    let max_len = cfg.max_word_length.unwrap_or(DEFAULT_MAX_WORD_LENGTH);
    let dedup_tol = cfg.dedup_tol.unwrap_or(DEFAULT_DEDUP_TOL);
    let cap = cfg.orbit_cap.unwrap_or(DEFAULT_ORBIT_CAP);
    let orbit = enumerate_orbit_capped(&spec, max_len, dedup_tol, cap)
        .map_err(CliError::computation)?;
    for w in &orbit.warnings {
        eprintln!("warning: {w}");
    }

    let est = critical_exponents(&orbit.samples).map_err(CliError::computation)?;
    let op = match cfg.alpha0 {
        Some(a) => OperatorSpec::new(a),
        None => OperatorSpec::scalar(&rs),
    };
    let lambda0_lower = lambda0_lower_bound(&op, est.delta_tilde);
    let margins =
        exponent_inequality_check(&rs, est.delta, est.delta_tilde).map_err(CliError::computation)?;

    let samples_path = sibling_samples_path(&out);
    let mut table = Table::new(vec!["word_length", "dist", "rho_radial"]);
    for s in &orbit.samples {
        table.push(vec![
            Cell::Int(s.word_length as i64),
            Cell::Float(s.dist),
            Cell::Float(s.rho_radial),
        ]);
    }
    crate::report::write_text(&table.to_csv()?, Some(&samples_path))?;

    let report = LatticeReport {
        delta: est.delta,
        delta_tilde: est.delta_tilde,
        lambda0_lower,
        inequality_margins: &margins,
        samples_csv_path: samples_path.display().to_string(),
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Computation(format!("cannot serialize report: {e}")))?;
    crate::report::write_text(&format!("{json}\n"), Some(&out))?;

    let d = &est.diagnostics;
    println!("group {} on {}: {} orbit points up to word length {max_len}", spec.name, rs.name, orbit.samples.len());
    println!("delta            = {}", fmt_float(est.delta));
    println!("delta_tilde      = {}", fmt_float(est.delta_tilde));
    println!("lambda0_lower    = {}  (alpha0 = {})", fmt_float(lambda0_lower), fmt_float(op.alpha0));
    println!(
        "inequality check = {} (lower margin {:.3e}, upper margin {:.3e})",
        if margins.holds { "holds" } else { "VIOLATED" },
        margins.lower_margin,
        margins.upper_margin
    );
    println!(
        "diagnostics: {} shells, window [{:.3}, {:.3}] with {} points, residual rms {:.3e}, c_eff {:.6}",
        d.shell_count, d.window_start, d.window_end, d.window_points, d.residual_rms, d.c_eff
    );
    println!("report: {}", out.display());
    println!("samples: {}", samples_path.display());
    println!(
        "note: if the quotient has unbounded injectivity radius, the bottom of the spectrum \
         equals alpha0 = {} exactly; that hypothesis is not verifiable from the generators \
         and is reported here unchecked.",
        fmt_float(op.alpha0)
    );
    Ok(())
}

fn load_spec(path: &Path) -> Result<LatticeSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Usage(format!("cannot read group file {}: {e}", path.display()))
    })?;
    LatticeSpec::from_json_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid group file {}: {e}", path.display())))
}

/// report.json -> report_samples.csv, next to the report.
fn sibling_samples_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}_samples.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_path_sits_next_to_the_report() {
        assert_eq!(
            sibling_samples_path(Path::new("/tmp/run/report.json")),
            PathBuf::from("/tmp/run/report_samples.csv")
        );
        assert_eq!(
            sibling_samples_path(Path::new("out")),
            PathBuf::from("out_samples.csv")
        );
    }
}
