//! The scale lambda(t) = sqrt(t)/ln t, the window it defines, and the local
//! norms of a small solution inside that window.

use gkdv::grid::{window_norms, Grid, State};
use gkdv::nonlinearity::NonlinearitySpec;
use gkdv::solver::{evolve_with, Retention, SolverConfig};
use gkdv::virial::{lambda_eval, window_interval, ScalingLaw};

fn main() -> gkdv::Result<()> {
    for t in [2.0, std::f64::consts::E * std::f64::consts::E, 10.0, 100.0, 1e4] {
        let s = lambda_eval(ScalingLaw::Dynamic, t)?;
        println!("t = {t:8.2}  lambda = {:.4}  lambda' = {:+.3e}", s.lambda, s.lambda_prime);
    }

    let g = Grid::new(1200.0, 8192)?;
    let spec = NonlinearitySpec::kdv();
    let s = State::new(0.0, g.sample(|x| 0.05 * (-x * x).exp())?)?;
    let cfg = SolverConfig::new(0.01, 40.0).with_stride(500);
    let traj = evolve_with(s, &spec, &cfg, &mut [], Retention::All)?.into_result()?;
    for snap in traj.snapshots.iter().filter(|s| s.time >= 2.0) {
        let w = window_interval(snap.time, 1.0, Some(&g))?;
        let n = window_norms(snap, w.a, w.b)?;
        println!("t = {:4.0}  window ({:+.3}, {:+.3})  L2 {:.4e}  H1 {:.4e}", snap.time, w.a, w.b, n.l2, n.h1);
    }
    Ok(())
}
