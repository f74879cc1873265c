fn main() {
    std::process::exit(rsad::cli::main_with_args(std::env::args_os()));
}
