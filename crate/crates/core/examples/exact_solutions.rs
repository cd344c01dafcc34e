//! Closed-form solitons and breathers, checked against the equation itself.

use gkdv::exact::{pde_residual, GardnerBreatherParams, MkdvBreatherParams, SolitonParams, DEFAULT_DT_PROBE};
use gkdv::grid::Grid;
use gkdv::nonlinearity::NonlinearitySpec;

fn main() -> gkdv::Result<()> {
    let g = Grid::new(60.0, 4096)?;

    for p in [2, 3] {
        let q = SolitonParams::new(1.0, p, 0.0)?;
        let spec = NonlinearitySpec::new(p, vec![])?;
        let r = pde_residual(&q, 0.0, &g, &spec, DEFAULT_DT_PROBE)?;
        println!("soliton p={p}: peak {:.4}, residual {r:.2e}", q.profile(0.0));
    }

    let b = MkdvBreatherParams::new(1.0, 0.5)?;
    let r = pde_residual(&b, 0.3, &g, &NonlinearitySpec::mkdv(), DEFAULT_DT_PROBE)?;
    println!(
        "mKdV breather: velocity {:.3}, internal period {:.4}, residual {r:.2e}",
        -b.gamma(),
        b.internal_period()
    );

    let gb = GardnerBreatherParams::new(1.0, 1.0, 1.0)?;
    let r = pde_residual(&gb, 0.0, &g, &gb.equation(), DEFAULT_DT_PROBE)?;
    println!("Gardner breather: Delta = {:.4}, residual {r:.2e}", gb.discriminant());

    match GardnerBreatherParams::new(0.1, 0.1 * 3f64.sqrt(), 1.0) {
        Ok(_) => println!("unexpectedly admissible"),
        Err(e) => println!("small standing Gardner breather: {e}"),
    }
    Ok(())
}
