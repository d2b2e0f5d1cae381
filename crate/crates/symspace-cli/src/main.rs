fn main() {
    std::process::exit(symspace_cli::run(std::env::args_os()));
}
