fn main() {
    std::process::exit(pade_universal::cli::run(std::env::args_os()));
}
