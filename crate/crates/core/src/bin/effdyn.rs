fn main() {
    std::process::exit(effdyn::cli::main_with_args(std::env::args_os()));
}
