fn main() {
    std::process::exit(weighted_robin::cli::run(std::env::args_os()));
}
