fn main() {
    std::process::exit(koenigs_shift::cli::main_with_args(std::env::args_os()));
}
