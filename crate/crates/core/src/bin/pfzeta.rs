fn main() {
    std::process::exit(pfzeta::cli::run(std::env::args_os()));
}
