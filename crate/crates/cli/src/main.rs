fn main() {
    std::process::exit(gfd_cli::execute(std::env::args_os()));
}
