//! Standing Gardner breathers (gamma = 0, beta = sqrt(3) alpha) exist only
//! above an admissibility edge, and those that exist are not small in H1.

use gkdv::exact::{ClosedForm, GardnerBreatherParams};
use gkdv::experiments::default_epsilon;
use gkdv::grid::{norms, Grid, State};

fn main() -> gkdv::Result<()> {
    let eps = default_epsilon();
    println!("small-data threshold eps = {eps:.4}");
    for mu in [0.5, 1.0, 2.0] {
        let edge = 1.0 / (3.0 * (2.0f64 * mu).sqrt());
        println!("mu = {mu}: admissible for alpha > {edge:.4}");
        for alpha in [0.5 * edge, 1.001 * edge, 1.5 * edge, 3.0 * edge] {
            match GardnerBreatherParams::new(alpha, 3f64.sqrt() * alpha, mu) {
                Err(e) => println!("  alpha = {alpha:.4}: {e}"),
                Ok(b) => {
                    let g = Grid::new((40.0 / b.beta()).max(60.0), 8192)?;
                    let h1 = norms(&State::new(0.0, b.evaluate(0.0, &g)?)?).h1;
                    println!("  alpha = {alpha:.4}: H1 = {h1:.4} ({})", if h1 > eps { "large" } else { "small" });
                }
            }
        }
    }
    Ok(())
}
