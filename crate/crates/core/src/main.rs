fn main() {
    std::process::exit(ris_geometry::cli::main_with_args(std::env::args_os()));
}
