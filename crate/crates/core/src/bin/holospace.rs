fn main() {
    std::process::exit(holospace::cli::run_from_args(std::env::args_os()));
}
