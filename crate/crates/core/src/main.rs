fn main() {
    std::process::exit(ctype_core::cli::run_command(std::env::args_os()));
}
