//! Periodic grid, spectral derivatives and the basic norms.

use gkdv::grid::{norms, spectral_derivative, Grid, State};

fn main() -> gkdv::Result<()> {
    let g = Grid::new(20.0, 256)?;
    let u = g.sample(|x| (-x * x).exp())?;

    // u'' = (4x^2 - 2) exp(-x^2)
    let uxx = spectral_derivative(&u, 2)?;
    let err = g
        .points()
        .zip(uxx.values())
        .map(|(x, d)| (d - (4.0 * x * x - 2.0) * (-x * x).exp()).abs())
        .fold(0.0, f64::max);
    println!("n = {}, h = {:.4}, max |u'' - exact| = {err:.2e}", g.n(), g.spacing());

    let n = norms(&State::new(0.0, u)?);
    println!("L1 = {:.6}  L2 = {:.6}  H1 = {:.6}  Linf = {:.6}", n.l1, n.l2, n.h1, n.linf);
    println!("sqrt(pi)   = {:.6}", std::f64::consts::PI.sqrt());
    Ok(())
}
