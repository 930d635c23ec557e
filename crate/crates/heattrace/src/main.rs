fn main() {
    std::process::exit(heattrace::cli::run_command(std::env::args_os()));
}
