fn main() {
    std::process::exit(pqfourier::cli::run(std::env::args_os()));
}
