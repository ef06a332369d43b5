//! The residual D_φ* T_z* - T_z D_σ: finite rank on S̃², compact on S².

use holospace::verify::{check_adjoint_s2_compact, check_adjoint_s2tilde, quarter_map, random_strict_moebius, rng};
use holospace::{Complex64, MoebiusMap, Result};

fn main() -> Result<()> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let maps = [
        ("(2z+1)/4", quarter_map()),
        ("0.8z/(z+2)", MoebiusMap::new(c(0.8), c(0.0), c(1.0), c(2.0))?),
        ("z/2", MoebiusMap::affine(c(0.5), c(0.0))?),
        ("random", random_strict_moebius(&mut rng(3))),
    ];
    for (name, m) in maps {
        let rep = check_adjoint_s2tilde(&m, 128, 0x5EED)?;
        println!(
            "{name:<12} rank {} singular values {}",
            rep.computed["numerical_rank"], rep.computed["leading_singular_values"]
        );
    }
    let rep = check_adjoint_s2_compact(&quarter_map(), &[64, 128, 256])?;
    println!("S2, (2z+1)/4: sigma20/sigma1 = {:.3e}", rep.computed["sigma20_over_sigma1"].as_f64().unwrap_or(f64::NAN));
    Ok(())
}
