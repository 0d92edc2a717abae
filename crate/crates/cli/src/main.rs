fn main() {
    std::process::exit(ergeom_cli::app::main_with_args(std::env::args_os()));
}
