fn main() {
    std::process::exit(softcover_cli::run_cli(std::env::args_os()));
}
