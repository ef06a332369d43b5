//! Truncated power series: products, quotients, composition and logarithms.

use holospace::{Complex64, Result, TruncatedSeries};

fn main() -> Result<()> {
    let n = 8;
    let one = Complex64::new(1.0, 0.0);
    let z = TruncatedSeries::identity(n);
    let two_minus_z = TruncatedSeries::from_real(&[2.0, -1.0], n);

    let f = z.div(&two_minus_z)?;
    println!("z/(2-z)       = {:?}", re_parts(&f));
    println!("(z/(2-z))^3   = {:?}", re_parts(&f.mul(&f)?.mul(&f)?));

    // Mercator: log(1 + z) = z - z²/2 + z³/3 - ...
    let log = TruncatedSeries::from_real(&[1.0, 1.0], n).log_series(Complex64::new(0.0, 0.0))?;
    println!("log(1+z)      = {:?}", re_parts(&log));
    println!("exp(log(1+z)) = {:?}", re_parts(&log.exp_series()));

    let g = TruncatedSeries::from_poly(&[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)], n);
    let composed = two_minus_z.mul(&two_minus_z)?.compose(&g)?;
    println!("(2-z/2)^2     = {:?}", re_parts(&composed));
    println!("value at 0.3  = {}", composed.evaluate(one * 0.3));
    Ok(())
}

fn re_parts(s: &TruncatedSeries) -> Vec<f64> {
    s.coeffs().iter().map(|c| (c.re * 1e6).round() / 1e6).collect()
}
