fn main() {
    std::process::exit(syrdyn::cli::run(std::env::args_os()));
}
