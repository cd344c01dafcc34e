use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gkdv::exact::{ClosedForm, GardnerBreatherParams, MkdvBreatherParams, SolitonParams};
use gkdv::experiments::{diagnose, emit_reports, run_experiment, sweep, ExperimentConfig};
use gkdv::grid::{Grid, State};
use gkdv::solver::write_snapshot;
use gkdv::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Generalized KdV simulator and virial diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured experiment and write its reports.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a closed-form solution. Output is CSV (x,u) if the file ends
    /// in .csv, a binary snapshot otherwise.
    Exact {
        #[arg(long, value_enum)]
        solution: Solution,
        /// Comma-separated k=v pairs: c, p, x0, alpha, beta, mu, L, n.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the virial series from stored snapshots.
    Diagnose {
        #[arg(long)]
        snapshots: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every .toml config in a directory.
    Sweep {
        #[arg(long)]
        configs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Solution {
    KdvSoliton,
    MkdvSoliton,
    MkdvBreather,
    GardnerBreather,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Simulate { config, out } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let result = run_experiment(&cfg)?;
            for w in &result.warnings {
                eprintln!("{w}");
            }
            emit_reports(&result, &out)?;
            let s = &result.summary;
            println!(
                "{} rows, sup H1 = {:.6e} (eps = {:.4}), trend win_h1 = {}",
                result.rows.len(),
                s.sup_h1,
                s.epsilon,
                s.trend_win_h1
            );
            if let Some(f) = &s.failure {
                eprintln!("run failed at {f}");
            } else if s.require_small && !s.below_eps {
                eprintln!("smallness hypothesis violated: sup H1 >= eps");
            }
            if !s.boundary_ok {
                eprintln!("WARNING: boundary amplitude {:.3e} exceeds tolerance", s.boundary_max);
            }
            Ok(s.exit_code())
        }
        Command::Exact {
            solution,
            params,
            t,
            out,
        } => {
            exact(solution, &parse_params(&params)?, t, &out)?;
            Ok(0)
        }
        Command::Diagnose {
            snapshots,
            config,
            out,
        } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let s = diagnose(&snapshots, &cfg, &out)?;
            println!("sup H1 = {:.6e}, trend win_h1 = {}", s.sup_h1, s.trend_win_h1);
            Ok(s.exit_code())
        }
        Command::Sweep { configs, out, jobs } => {
            let entries = sweep(&configs, &out, jobs)?;
            let mut worst = 0;
            for e in &entries {
                let code = e.exit_code();
                match &e.outcome {
                    Ok(s) => println!("{}: exit {code}, sup H1 = {:.6e}", e.config.display(), s.sup_h1),
                    Err(err) => println!("{}: exit {code}, {err}", e.config.display()),
                }
                worst = worst.max(code);
            }
            Ok(worst)
        }
    }
}

fn parse_params(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected k=v, got {pair:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{k}: not a number: {v:?}")))?;
        map.insert(k.trim().to_string(), v);
    }
    Ok(map)
}

fn exact(solution: Solution, params: &BTreeMap<String, f64>, t: f64, out: &Path) -> Result<()> {
    let allowed: &[&str] = match solution {
        Solution::KdvSoliton => &["c", "x0", "L", "n"],
        Solution::MkdvSoliton => &["c", "x0", "L", "n"],
        Solution::MkdvBreather => &["alpha", "beta", "x0", "L", "n"],
        Solution::GardnerBreather => &["alpha", "beta", "mu", "x0", "L", "n"],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Config(format!(
            "unknown parameter {k:?}; expected one of {allowed:?}"
        )));
    }
    let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
    let n = get("n", 1024.0);
    if n.fract() != 0.0 || n < 0.0 {
        return Err(Error::Config(format!("n must be a positive integer, got {n}")));
    }
    let grid = Grid::new(get("L", 50.0), n as usize)?;
    let x0 = get("x0", 0.0);
    let field = match solution {
        Solution::KdvSoliton => SolitonParams::new(get("c", 1.0), 2, x0)?.evaluate(t, &grid)?,
        Solution::MkdvSoliton => SolitonParams::new(get("c", 1.0), 3, x0)?.evaluate(t, &grid)?,
        Solution::MkdvBreather => {
            MkdvBreatherParams::centered_at(get("alpha", 1.0), get("beta", 1.0), x0)?
                .evaluate(t, &grid)?
        }
        Solution::GardnerBreather => GardnerBreatherParams::centered_at(
            get("alpha", 1.0),
            get("beta", 1.0),
            get("mu", 1.0),
            x0,
        )?
        .evaluate(t, &grid)?,
    };
    let state = State::new(t, field)?;
    if out.extension().and_then(|e| e.to_str()) == Some("csv") {
        let mut text = String::from("x,u\n");
        for (x, u) in grid.points().zip(state.values()) {
            let _ = writeln!(text, "{x},{u}");
        }
        std::fs::write(out, text).map_err(|e| Error::Io {
            path: out.to_path_buf(),
            source: e,
        })
    } else {
        write_snapshot(out, &state)
    }
}
