fn main() {
    std::process::exit(polgoi::cli::main_with_args(std::env::args_os()));
}
