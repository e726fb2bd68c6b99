fn main() {
    std::process::exit(stabkit::cli::run(std::env::args_os()));
}
