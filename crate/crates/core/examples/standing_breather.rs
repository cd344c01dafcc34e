//! A standing mKdV breather stays inside the shrinking window: the local L2
//! norm oscillates but does not decay.

use gkdv::exact::{ClosedForm, MkdvBreatherParams};
use gkdv::grid::{window_norms, Grid, State};
use gkdv::nonlinearity::NonlinearitySpec;
use gkdv::solver::{evolve_with, Retention, SolverConfig};
use gkdv::virial::window_interval;

fn main() -> gkdv::Result<()> {
    let b = MkdvBreatherParams::standing(0.3)?;
    println!("alpha = {}, beta = {:.4}, gamma = {:.1e}", b.alpha(), b.beta(), b.gamma());

    let g = Grid::new(200.0, 4096)?;
    let s = State::new(0.0, b.evaluate(0.0, &g)?)?;
    let cfg = SolverConfig::new(0.01, 60.0).with_stride(500);
    let traj = evolve_with(s, &NonlinearitySpec::mkdv(), &cfg, &mut [], Retention::All)?.into_result()?;
    for snap in traj.snapshots.iter().filter(|s| s.time >= 2.0) {
        let w = window_interval(snap.time, 1.0, Some(&g))?;
        println!("t = {:4.0}  win_l2 = {:.4}", snap.time, window_norms(snap, w.a, w.b)?.l2);
    }
    Ok(())
}
