fn main() { std::process::exit(pellforms::cli::run_main()); }
