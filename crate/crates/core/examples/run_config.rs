//! Run an experiment from a TOML config and write its reports.
//!
//!     cargo run --release --example run_config -- configs/quick_gaussian.toml /tmp/out

use std::path::PathBuf;

use gkdv::experiments::{emit_reports, run_experiment, ExperimentConfig};

fn main() -> gkdv::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/quick_gaussian.toml"));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("gkdv_run"));

    let cfg = ExperimentConfig::from_file(&config)?;
    let result = run_experiment(&cfg)?;
    emit_reports(&result, &out)?;

    let s = &result.summary;
    for line in &result.sizing.lines {
        println!("sizing: {line}");
    }
    println!("{} rows written to {}", result.rows.len(), out.display());
    println!("sup H1 = {:.4e} (below eps: {}), trend win_h1 = {:.4}", s.sup_h1, s.below_eps, s.trend_win_h1);
    println!("max drifts: mass {:.1e}, L2 {:.1e}, energy {:.1e}", s.max_drift_mass, s.max_drift_l2, s.max_drift_energy);
    Ok(())
}
