use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::grid::State;
use crate::solver::{read_snapshot, write_snapshot};
use crate::virial::{VirialRow, VirialSeries};

use super::config::ExperimentConfig;
use super::runner::{
    conservation_from_rows, run_experiment, soliton_region_h1, summarize, ExperimentOutput,
    RunSummary,
};

pub const SERIES_HEADER: &str = "t,I,dI_fd,dI_rhs,J_tanh2,dJ_fd,dJ_rhs,J_sech6,K_tanh3,dK_fd,\
dK_rhs,K_sech8,i2,i3,i9,kato,cum_i2,cum_i3,cum_i9,cum_kato,win_a,win_b,win_l2,win_h1,mass,l2,\
energy,lambda_valid";

pub const SNAPSHOT_EXTENSION: &str = "gkdv";

/// The virial series as CSV text, one row per observed state.
pub fn series_csv(rows: &[VirialRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 400);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for r in rows {
        let nums = [
            r.t, r.i, r.di_fd, r.di_rhs, r.j_tanh2, r.dj_fd, r.dj_rhs, r.j_sech6, r.k_tanh3,
            r.dk_fd, r.dk_rhs, r.k_sech8, r.i2, r.i3, r.i9, r.kato, r.cum_i2, r.cum_i3, r.cum_i9,
            r.cum_kato, r.win_a, r.win_b, r.win_l2, r.win_h1, r.mass, r.l2, r.energy,
        ];
        for v in nums {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{}", r.lambda_valid);
    }
    out
}

fn soliton_region_csv(region: &[(f64, f64)], v: f64) -> String {
    let mut out = format!("# v = {v}\nt,h1_right\n");
    for (t, h) in region {
        let _ = writeln!(out, "{t},{h}");
    }
    out
}

fn manifest(cfg: &ExperimentConfig, s: &RunSummary, extra: &[(&str, String)]) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k}={v}");
    };
    kv("scenario", &cfg.scenario.kind.name());
    kv("model", &format!("{:?}", cfg.equation.model).to_lowercase());
    kv("half_length", &cfg.grid.half_length);
    kv("n", &cfg.grid.n);
    kv("dt", &cfg.solver.dt);
    kv("t_end", &cfg.solver.t_end);
    kv("dealias", &cfg.solver.dealias);
    kv("sup_h1", &s.sup_h1);
    kv("epsilon", &s.epsilon);
    kv("below_eps", &s.below_eps);
    kv("require_small", &s.require_small);
    kv("sup_l1", &s.sup_l1);
    kv("boundary_max", &s.boundary_max);
    kv("boundary_ok", &s.boundary_ok);
    kv("max_drift_mass", &s.max_drift_mass);
    kv("max_drift_l2", &s.max_drift_l2);
    kv("max_drift_energy", &s.max_drift_energy);
    kv("trend_win_h1", &s.trend_win_h1);
    kv("trend_win_l2", &s.trend_win_l2);
    kv("failure", &s.failure.as_deref().unwrap_or("none"));
    kv("exit_code", &s.exit_code());
    for (k, v) in extra {
        kv(k, v);
    }
    out.push_str("\n# config\n");
    for line in cfg.to_toml_string().lines() {
        let _ = writeln!(out, "# {line}");
    }
    out
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

pub fn snapshot_file_name(index: usize) -> String {
    format!("{index:06}.{SNAPSHOT_EXTENSION}")
}

/// Writes series.csv, soliton_region.csv, manifest.txt and the retained
/// snapshots (plus the final state) under `dir`.
pub fn emit_reports(out: &ExperimentOutput, dir: &Path) -> Result<()> {
    create_dir(dir)?;
    write_text(&dir.join("series.csv"), &series_csv(&out.rows))?;
    write_text(
        &dir.join("soliton_region.csv"),
        &soliton_region_csv(&out.soliton_region, out.config.diagnostics.soliton_region_v),
    )?;
    let mut extra = vec![("rows", out.rows.len().to_string())];
    for (i, w) in out.warnings.iter().enumerate() {
        extra.push(("warning", format!("{i}: {w}")));
    }
    for line in &out.sizing.lines {
        extra.push(("sizing", line.clone()));
    }
    write_text(&dir.join("manifest.txt"), &manifest(&out.config, &out.summary, &extra))?;

    let snaps = dir.join("snapshots");
    create_dir(&snaps)?;
    let traj = &out.trajectory;
    let mut states: Vec<&State> = traj.snapshots.iter().collect();
    if states.last().map(|s| s.time) != Some(traj.final_state.time) {
        states.push(&traj.final_state);
    }
    for (i, s) in states.into_iter().enumerate() {
        write_snapshot(snaps.join(snapshot_file_name(i)), s)?;
    }
    Ok(())
}

/// Loads every snapshot in `dir`, sorted by time.
pub fn load_snapshots(dir: &Path) -> Result<Vec<State>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut states = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) == Some(SNAPSHOT_EXTENSION) {
            states.push(read_snapshot(&path)?);
        }
    }
    if states.is_empty() {
        return Err(Error::Precondition(format!(
            "no .{SNAPSHOT_EXTENSION} files in {}",
            dir.display()
        )));
    }
    states.sort_by(|a, b| a.time.total_cmp(&b.time));
    if states.windows(2).any(|w| w[0].time == w[1].time) {
        return Err(Error::Precondition("duplicate snapshot times".into()));
    }
    Ok(states)
}

/// Recomputes all diagnostics from stored snapshots and writes series.csv,
/// soliton_region.csv and manifest.txt. Finite differences use the spacing
/// of the stored times.
pub fn diagnose(snapshot_dir: &Path, cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    let states = load_snapshots(snapshot_dir)?;
    let grid = cfg.grid()?;
    if let Some(s) = states.iter().find(|s| *s.grid() != grid) {
        return Err(Error::Precondition(format!(
            "snapshot at t = {} is on a different grid than the config",
            s.time
        )));
    }
    let mut series = VirialSeries::new(cfg.virial_settings()?);
    let v = cfg.diagnostics.soliton_region_v;
    let mut region = Vec::with_capacity(states.len());
    for s in &states {
        series.push(s)?;
        region.push((s.time, soliton_region_h1(s, v)));
    }
    let rows = series.into_rows();
    let conservation = conservation_from_rows(&rows);
    let summary = summarize(cfg, &rows, &conservation, None);

    create_dir(out_dir)?;
    write_text(&out_dir.join("series.csv"), &series_csv(&rows))?;
    write_text(&out_dir.join("soliton_region.csv"), &soliton_region_csv(&region, v))?;
    let extra = [
        ("rows", rows.len().to_string()),
        ("source", snapshot_dir.display().to_string()),
    ];
    write_text(&out_dir.join("manifest.txt"), &manifest(cfg, &summary, &extra))?;
    Ok(summary)
}

#[derive(Debug)]
pub struct SweepEntry {
    pub config: PathBuf,
    pub outcome: Result<RunSummary>,
}

impl SweepEntry {
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            Ok(s) => s.exit_code(),
            Err(e) => e.exit_code(),
        }
    }
}

/// Runs `simulate` for every .toml file in `configs`, at most `jobs` at a
/// time, each into `out/<file stem>`. Writes sweep.csv with one line per
/// config. Entries are returned in file-name order.
pub fn sweep(configs: &Path, out: &Path, jobs: usize) -> Result<Vec<SweepEntry>> {
    if jobs == 0 {
        return Err(Error::InvalidParameter("jobs must be positive".into()));
    }
    let entries = fs::read_dir(configs).map_err(|e| Error::io(configs, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(configs, e))?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            paths.push(path);
        }
    }
    paths.sort();
    create_dir(out)?;

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<RunSummary>>>> =
        Mutex::new(paths.iter().map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(paths.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = paths.get(i) else { break };
                let r = run_one(path, out);
                results.lock().expect("sweep results")[i] = Some(r);
            });
        }
    });

    let entries: Vec<SweepEntry> = paths
        .into_iter()
        .zip(results.into_inner().expect("sweep results"))
        .map(|(config, r)| SweepEntry {
            config,
            outcome: r.expect("every config is run"),
        })
        .collect();

    let mut csv = String::from("config,exit_code,sup_h1,below_eps,trend_win_h1,trend_win_l2,error\n");
    for e in &entries {
        let name = stem(&e.config);
        match &e.outcome {
            Ok(s) => {
                let _ = writeln!(
                    csv,
                    "{name},{},{},{},{},{},{}",
                    s.exit_code(),
                    s.sup_h1,
                    s.below_eps,
                    s.trend_win_h1,
                    s.trend_win_l2,
                    s.failure.as_deref().unwrap_or("").replace(',', ";")
                );
            }
            Err(err) => {
                let msg = err.to_string().replace([',', '\n'], ";");
                let _ = writeln!(csv, "{name},{},NaN,false,NaN,NaN,{msg}", err.exit_code());
            }
        }
    }
    write_text(&out.join("sweep.csv"), &csv)?;
    Ok(entries)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".into())
}

fn run_one(path: &Path, out: &Path) -> Result<RunSummary> {
    let cfg = ExperimentConfig::from_file(path)?;
    let result = run_experiment(&cfg)?;
    emit_reports(&result, &out.join(stem(path)))?;
    Ok(result.summary)
}
