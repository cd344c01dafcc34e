//! The virial functionals along a trajectory: finite differences of I, J, K
//! against their exact time derivatives.

use gkdv::grid::{Grid, State};
use gkdv::nonlinearity::NonlinearitySpec;
use gkdv::solver::{evolve_with, Retention, SolverConfig};
use gkdv::virial::{VirialSeries, VirialSettings};

fn main() -> gkdv::Result<()> {
    // radiation near k = 8 moves at 3k^2 ~ 200, so the box must hold
    // t * 200 on each side or the tail wraps through the seam
    let g = Grid::new(1600.0, 8192)?;
    let spec = NonlinearitySpec::gardner(1.0)?;
    let s = State::new(0.0, g.sample(|x| 0.1 * (-x * x).exp())?)?;

    let mut series = VirialSeries::new(VirialSettings::new(spec.clone()));
    let cfg = SolverConfig::new(0.01, 6.0).with_stride(5);
    evolve_with(s, &spec, &cfg, &mut [&mut series], Retention::None)?.into_result()?;

    println!("{:>5} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}", "t", "dI_fd", "dI_rhs", "dJ_fd", "dJ_rhs", "dK_fd", "dK_rhs");
    for r in series.rows().iter().filter(|r| r.di_fd.is_finite()).step_by(10) {
        println!(
            "{:5.2} {:13.6e} {:13.6e} {:13.6e} {:13.6e} {:13.6e} {:13.6e}",
            r.t, r.di_fd, r.di_rhs, r.dj_fd, r.dj_rhs, r.dk_fd, r.dk_rhs
        );
    }
    Ok(())
}
