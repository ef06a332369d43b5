//! Norm curves for φ = a z^M, written as CSV to stdout.

fn main() {
    std::process::exit(holospace::cli::run_from_args(["holospace", "figure", "--format", "csv"]));
}
