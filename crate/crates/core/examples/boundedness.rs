//! D_φ on S², C_φ: H² -> S² and DC_φ on H², with and without a strict symbol.

use holospace::verify::trio_norms;
use holospace::{Result, Symbol};

fn main() -> Result<()> {
    for s in ["moebius:1,0,0,0,0,0,2,0", "moebius:2,0,1,0,0,0,4,0", "poly:0,0,1,0"] {
        let sym: Symbol = s.parse()?;
        println!("{s}");
        for n in [32, 64, 128, 256] {
            let [d, c, dc] = trio_norms(&sym, n)?;
            println!("  N = {n:>3}: |D_phi| = {d:>10.6}  |C_phi| = {c:>10.6}  |DC_phi| = {dc:>10.6}");
        }
    }
    Ok(())
}
