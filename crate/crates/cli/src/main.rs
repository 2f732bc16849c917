fn main() {
    std::process::exit(spectral_pencil_cli::commands::main_with(std::env::args_os()));
}
