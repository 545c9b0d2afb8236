fn main() {
    std::process::exit(discaudit::cli::run(std::env::args_os()));
}
