fn main() {
    std::process::exit(rtea::cli::run(std::env::args_os()));
}
