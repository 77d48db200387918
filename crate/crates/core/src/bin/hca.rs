fn main() {
    std::process::exit(hca::cli::run(std::env::args_os()));
}
