//! Intertwining of D_φ* with D_σ on weighted Bergman, Hardy and Dirichlet spaces.

use holospace::verify::{check_adjoint_intertwine, quarter_map, random_strict_moebius, rng};
use holospace::Result;

fn main() -> Result<()> {
    let mut r = rng(0x5EED);
    let maps = [quarter_map(), random_strict_moebius(&mut r)];
    for m in &maps {
        println!("phi = ({})z + ({}) over ({})z + ({})", m.a, m.b, m.c, m.d);
        for alpha in [2.0, 1.0, 0.0, -0.5, -1.0, -2.0] {
            let rep = check_adjoint_intertwine(m, alpha, 96)?;
            println!("  alpha = {alpha:>4}: relative discrepancy {:.2e}", rep.discrepancy);
        }
    }
    Ok(())
}
