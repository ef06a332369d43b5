//! Reproducing kernels and derivative-evaluation kernels in each space.

use holospace::{Complex64, KernelKind, Result, SpaceSpec, TruncatedSeries};

fn main() -> Result<()> {
    let n = 128;
    let w = Complex64::new(0.3, -0.4);
    let f = TruncatedSeries::from_real(&[1.0, -2.0, 0.5, 3.0], n);
    println!("f(w) = {:.12}, f'(w) = {:.12}", f.evaluate(w), f.derivative().evaluate(w));

    for space in ["hardy", "bergman:0", "bergman:1.5", "dirichlet", "s2", "s2tilde"] {
        let sp: SpaceSpec = space.parse()?;
        let kp = sp.kernel(KernelKind::PointEval, w, n)?;
        let kd = sp.kernel(KernelKind::DerivEval, w, n)?;
        println!(
            "{space:<12} <f,K_w> = {:.12}  <f,K_w'> = {:.12}  |K_w'|^2 = {:.6}",
            sp.inner_product(&f, &kp)?,
            sp.inner_product(&f, &kd)?,
            sp.inner_product(&kd, &kd)?.re,
        );
    }
    Ok(())
}
