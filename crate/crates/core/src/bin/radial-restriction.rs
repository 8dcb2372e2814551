fn main() {
    std::process::exit(radial_restriction::cli::main_with_args(std::env::args_os()));
}
