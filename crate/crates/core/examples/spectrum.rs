//! Eigenvalues of truncated D_φ for monomial and affine symbols.

use holospace::verify::collapse;
use holospace::{OpMatrix, Result, Symbol};

fn main() -> Result<()> {
    for s in ["monomial:0.3,0,2", "monomial:0,0.5,2", "monomial:-0.7,0,3", "poly:0.2,0,0.4,0"] {
        let sym: Symbol = s.parse()?;
        let eig = OpMatrix::d_phi(&sym, 64)?.spectrum()?;
        let distinct: Vec<String> = collapse(&eig, 1e-9)
            .into_iter()
            .map(|(z, k)| format!("{:.6} (x{k})", z))
            .collect();
        println!("{s:<20} {}", distinct.join(", "));
    }
    Ok(())
}
