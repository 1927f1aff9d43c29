fn main() {
    std::process::exit(qwc::cli::run(std::env::args_os()));
}
