fn main() {
    std::process::exit(ednorm::cli::run(std::env::args_os()));
}
