//! Evolve a KdV soliton and compare with the travelling closed form.

use gkdv::exact::{ClosedForm, SolitonParams};
use gkdv::grid::{Grid, State};
use gkdv::nonlinearity::NonlinearitySpec;
use gkdv::solver::{conservation_report, evolve, SolverConfig};

fn main() -> gkdv::Result<()> {
    let g = Grid::new(100.0, 2048)?;
    let q = SolitonParams::new(1.0, 2, -20.0)?;
    let spec = NonlinearitySpec::kdv();
    let s = State::new(0.0, q.evaluate(0.0, &g)?)?;

    let cfg = SolverConfig::new(2e-3, 20.0).with_stride(2500);
    let traj = evolve(s, &spec, &cfg, &mut [])?.into_result()?;

    for (snap, r) in traj.snapshots.iter().zip(conservation_report(&traj.snapshots, &spec)) {
        let exact = q.evaluate(snap.time, &g)?;
        let err = snap
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "t = {:5.1}  max error {err:.2e}  drift mass {:.1e} L2 {:.1e} energy {:.1e}",
            snap.time, r.drift_mass, r.drift_l2, r.drift_energy
        );
    }
    Ok(())
}
