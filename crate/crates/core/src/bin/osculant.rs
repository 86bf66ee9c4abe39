fn main() {
    std::process::exit(osculant::cli::run(std::env::args_os()));
}
