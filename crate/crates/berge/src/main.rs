fn main() {
    std::process::exit(berge::cli::main_with(std::env::args_os()));
}
