fn main() {
    std::process::exit(helixlab::main_with_args(std::env::args_os()));
}
