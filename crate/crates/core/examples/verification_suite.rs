//! Runs the default check battery and prints a summary.

use holospace::verify::{run_suite, DEFAULT_SEED};

fn main() {
    let reports = run_suite(DEFAULT_SEED);
    for r in &reports {
        println!("{:<5} {:>10.2e} <= {:<8.0e} {}", if r.passed { "ok" } else { "FAIL" }, r.discrepancy, r.tolerance, r.check_id);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed", reports.len());
    std::process::exit(i32::from(failed > 0));
}
