fn main() {
    std::process::exit(jcsr::cli::main_with(std::env::args_os()));
}
