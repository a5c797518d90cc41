fn main() {
    std::process::exit(gamma_poles::cli::main_with_args(std::env::args_os()));
}
