fn main() {
    std::process::exit(procwisard::cli::main_with_args(std::env::args_os()));
}
