fn main() {
    std::process::exit(efsphere_cli::run(std::env::args_os()));
}
