fn main() {
    std::process::exit(wordle_difficulty::cli::run(std::env::args_os()));
}
