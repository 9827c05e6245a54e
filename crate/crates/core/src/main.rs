fn main() {
    std::process::exit(graphon::cli::run(std::env::args_os()));
}
