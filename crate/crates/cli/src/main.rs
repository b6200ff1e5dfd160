fn main() {
    std::process::exit(hypaffine_cli::run_args(std::env::args_os()));
}
