fn main() {
    std::process::exit(opuc::cli::run(std::env::args_os()));
}
