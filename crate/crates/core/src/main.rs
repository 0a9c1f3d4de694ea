fn main() {
    std::process::exit(widomlab::harness::cli::main_with_args(std::env::args_os()));
}
