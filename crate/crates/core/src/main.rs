fn main() {
    std::process::exit(ptmodel::cli::main_from(std::env::args_os()));
}
