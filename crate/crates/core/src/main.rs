fn main() {
    std::process::exit(waveheat::cli::run(std::env::args_os()));
}
