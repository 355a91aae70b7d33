fn main() {
    std::process::exit(hedgehog_modes::cli::main_with_args(std::env::args_os()));
}
