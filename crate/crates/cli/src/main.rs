fn main() {
    std::process::exit(opk::main_with_args(std::env::args_os()));
}
