//! Writes D_φ as CSV and as the binary matrix format, then reads it back.

use holospace::{OpMatrix, Result, SpaceSpec, Symbol};

fn main() -> Result<()> {
    let sym: Symbol = "moebius:2,0,1,0,0,0,4,0".parse()?;
    let op = OpMatrix::d_phi(&sym, 6)?.with_space(SpaceSpec::S2);
    op.write_csv(std::io::stdout())?;

    let mut bytes = Vec::new();
    op.write_binary(&mut bytes)?;
    let back = OpMatrix::read_binary(bytes.as_slice())?;
    println!("{} bytes, round trip exact: {}", bytes.len(), back.entries() == op.entries());
    println!("{:?}", op.spectral_summary(1e-10)?.singular_values);
    Ok(())
}
