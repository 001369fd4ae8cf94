fn main() {
    std::process::exit(gridorder::cli::main_with_args(std::env::args_os()));
}
