fn main() {
    std::process::exit(rfspectra::cli::run(std::env::args_os()));
}
