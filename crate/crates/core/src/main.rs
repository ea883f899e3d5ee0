fn main() {
    std::process::exit(kickfid::cli::run(std::env::args_os()));
}
