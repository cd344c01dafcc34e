//! Binary snapshots: write a short trajectory, read it back, and recompute
//! the diagnostics from disk.

use gkdv::experiments::{diagnose, snapshot_file_name, ExperimentConfig};
use gkdv::grid::{Grid, State};
use gkdv::nonlinearity::NonlinearitySpec;
use gkdv::solver::{evolve, read_snapshot, write_snapshot};

const CONFIG: &str = r#"
[scenario]
kind = "gaussian_small"
amplitude = 0.05

[equation]
model = "kdv"

[grid]
half_length = 300.0
n = 2048

[solver]
dt = 0.01
t_end = 4.0
snapshot_stride = 10
"#;

fn main() -> gkdv::Result<()> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let g: Grid = cfg.grid()?;
    let s = State::new(0.0, g.sample(|x| 0.05 * (-x * x).exp())?)?;
    let traj = evolve(s, &NonlinearitySpec::kdv(), &cfg.solver_config(), &mut [])?.into_result()?;

    let dir = std::env::temp_dir().join("gkdv_snapshots");
    let snaps = dir.join("snapshots");
    std::fs::create_dir_all(&snaps).map_err(|e| gkdv::Error::Io { path: snaps.clone(), source: e })?;
    for (i, s) in traj.snapshots.iter().enumerate() {
        write_snapshot(snaps.join(snapshot_file_name(i)), s)?;
    }
    let back = read_snapshot(snaps.join(snapshot_file_name(3)))?;
    assert_eq!(back, traj.snapshots[3]);
    println!("{} snapshots in {}", traj.snapshots.len(), snaps.display());

    let summary = diagnose(&snaps, &cfg, &dir.join("diagnostics"))?;
    println!("recomputed: sup H1 = {:.6e}, exit code {}", summary.sup_h1, summary.exit_code());
    Ok(())
}
