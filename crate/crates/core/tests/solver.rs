use gkdv::exact::{ClosedForm, GardnerBreatherParams, MkdvBreatherParams, SolitonParams};
use gkdv::grid::{norms, Field, Grid, State};
use gkdv::nonlinearity::NonlinearitySpec;
use gkdv::solver::{conservation_report, evolve, evolve_with, Retention, SolverConfig};

fn max_error(a: &Field, b: &Field) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
}

fn soliton_error(n: usize, dt: f64, t_end: f64) -> f64 {
    let g = Grid::new(200.0, n).unwrap();
    let q = SolitonParams::new(1.0, 2, 0.0).unwrap();
    let s = State::new(0.0, q.evaluate(0.0, &g).unwrap()).unwrap();
    let cfg = SolverConfig::new(dt, t_end).with_stride(usize::MAX);
    let traj = evolve_with(s, &NonlinearitySpec::kdv(), &cfg, &mut [], Retention::None)
        .unwrap()
        .into_result()
        .unwrap();
    max_error(&traj.final_state.field, &q.evaluate(t_end, &g).unwrap())
}

#[test]
fn kdv_soliton_is_transported() {
    let err = soliton_error(4096, 1e-3, 20.0);
    assert!(err <= 1e-6, "max error {err}");
}

#[test]
fn fourth_order_in_time() {
    // steps near the nonlinear limit so that the time error dominates
    let coarse = soliton_error(2048, 0.03, 12.0);
    let fine = soliton_error(2048, 0.015, 12.0);
    let ratio = coarse / fine;
    assert!((10.0..=24.0).contains(&ratio), "ratio {ratio} ({coarse} / {fine})");
}

#[test]
fn mkdv_breather_over_one_period() {
    let b = MkdvBreatherParams::new(2.0, 1.0).unwrap();
    let g = Grid::new(100.0, 4096).unwrap();
    let period = b.internal_period();
    let steps = 800.0;
    let dt = period / steps;
    let s = State::new(0.0, b.evaluate(0.0, &g).unwrap()).unwrap();
    let cfg = SolverConfig::new(dt, steps * dt).with_stride(usize::MAX);
    let traj = evolve_with(s, &NonlinearitySpec::mkdv(), &cfg, &mut [], Retention::None)
        .unwrap()
        .into_result()
        .unwrap();
    let exact = b.evaluate(traj.final_state.time, &g).unwrap();
    let diff: Vec<f64> = traj
        .final_state
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, e)| a - e)
        .collect();
    let err = norms(&State::new(0.0, Field::new(g, diff).unwrap()).unwrap()).l2;
    assert!(err <= 1e-4, "L2 error {err}");
}

#[test]
fn gardner_breather_is_reproduced() {
    let b = GardnerBreatherParams::new(1.0, 1.0, 1.0).unwrap();
    let g = Grid::new(60.0, 2048).unwrap();
    let s = State::new(0.0, b.evaluate(0.0, &g).unwrap()).unwrap();
    let cfg = SolverConfig::new(5e-4, 1.0).with_stride(usize::MAX);
    let traj = evolve_with(s, &b.equation(), &cfg, &mut [], Retention::None)
        .unwrap()
        .into_result()
        .unwrap();
    let err = max_error(&traj.final_state.field, &b.evaluate(1.0, &g).unwrap());
    assert!(err <= 1e-6, "max error {err}");
}

#[test]
fn time_reversal_recovers_initial_data() {
    // u(t, x) -> u(-t, -x) maps solutions to solutions
    let g = Grid::new(50.0, 1024).unwrap();
    let spec = NonlinearitySpec::gardner(0.5).unwrap();
    let u0 = g.sample(|x| 0.3 * (-(x - 1.0) * (x - 1.0) / 3.0).exp()).unwrap();
    let cfg = SolverConfig::new(1e-3, 2.0).with_stride(usize::MAX);
    let forward = evolve_with(State::new(0.0, u0.clone()).unwrap(), &spec, &cfg, &mut [], Retention::None)
        .unwrap()
        .into_result()
        .unwrap();
    let mirrored = State::new(0.0, forward.final_state.field.reflected()).unwrap();
    let back = evolve_with(mirrored, &spec, &cfg, &mut [], Retention::None)
        .unwrap()
        .into_result()
        .unwrap();
    let err = max_error(&back.final_state.field.reflected(), &u0);
    assert!(err <= 1e-9, "reversal error {err}");
}

#[test]
fn small_gaussian_conserves_invariants() {
    let g = Grid::new(400.0, 8192).unwrap();
    let spec = NonlinearitySpec::kdv();
    let s = State::new(0.0, g.sample(|x| 0.05 * (-x * x).exp()).unwrap()).unwrap();
    let cfg = SolverConfig::new(0.01, 100.0).with_stride(1000);
    let traj = evolve(s, &spec, &cfg, &mut []).unwrap().into_result().unwrap();
    let report = conservation_report(&traj.snapshots, &spec);
    assert_eq!(report.len(), 11);
    let h1_0 = norms(&traj.snapshots[0]).h1;
    for (r, s) in report.iter().zip(&traj.snapshots) {
        assert!(r.drift_mass.abs() <= 1e-8, "{r:?}");
        assert!(r.drift_l2.abs() <= 1e-8, "{r:?}");
        assert!(r.drift_energy.abs() <= 1e-8, "{r:?}");
        assert!(norms(s).h1 <= 2.0 * h1_0);
    }
}

#[test]
fn mass_is_conserved_to_roundoff_per_step() {
    let g = Grid::new(30.0, 512).unwrap();
    let spec = NonlinearitySpec::gardner(1.0).unwrap();
    let s = State::new(0.0, g.sample(|x| 0.4 * (-x * x / 2.0).exp() * (1.0 + x / 5.0)).unwrap())
        .unwrap();
    let cfg = SolverConfig::new(2e-3, 0.2);
    let traj = evolve(s, &spec, &cfg, &mut []).unwrap();
    let report = conservation_report(&traj.snapshots, &spec);
    for r in report {
        assert!(r.drift_mass.abs() <= 1e-13, "{r:?}");
    }
}

#[test]
fn blow_up_is_reported() {
    // undealiased, under-resolved large data in a tiny box: the run must
    // stop with a blow-up failure rather than return garbage
    let g = Grid::new(4.0, 32).unwrap();
    let spec = NonlinearitySpec::new(
        2,
        vec![gkdv::nonlinearity::Monomial {
            degree: 5,
            coeff: 50.0,
        }],
    )
    .unwrap();
    let s = State::new(0.0, g.sample(|x| 0.9 * (-x * x).exp()).unwrap()).unwrap();
    let cfg = SolverConfig::new(0.05, 50.0).with_dealias(false);
    let traj = evolve(s, &spec, &cfg, &mut []).unwrap();
    let failure = traj.failure.expect("blow-up expected");
    assert_eq!(failure.error.exit_code(), 3);
}
