fn main() {
    std::process::exit(altroute::cli::run(std::env::args_os()));
}
