//! Norm of f -> f'(a z^M) on S² against its closed form.

use holospace::{Complex64, MonomialMap, OpMatrix, Result, SpaceSpec, Symbol};

fn main() -> Result<()> {
    println!("{:>2} {:>5} {:>3} {:>16} {:>16}", "M", "|a|", "nu", "formula", "svd");
    for m in 1..=3 {
        for a in [0.2, 0.5, 0.7, 0.9] {
            let map = MonomialMap::new(Complex64::new(a, 0.0), m)?;
            let n = map.min_trunc_for_norm().max(8);
            let op = OpMatrix::d_phi(&Symbol::Monomial(map), n)?.with_space(SpaceSpec::S2);
            println!(
                "{m:>2} {a:>5} {:>3} {:>16.12} {:>16.12}",
                map.nu(),
                map.norm_formula(),
                op.operator_norm()?
            );
        }
    }
    Ok(())
}
