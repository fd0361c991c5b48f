fn main() {
    std::process::exit(safeforecast::cli::main_with(std::env::args_os()));
}
