fn main() {
    std::process::exit(shadowvol::cli::main_with_args(std::env::args_os()));
}
