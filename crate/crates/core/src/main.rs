fn main() {
    std::process::exit(nlixy::cli::run(std::env::args_os()));
}
