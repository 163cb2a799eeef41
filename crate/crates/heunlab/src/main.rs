fn main() {
    std::process::exit(heunlab::cli::main(std::env::args_os()));
}
