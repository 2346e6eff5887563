fn main() {
    std::process::exit(fgan_cli::run(std::env::args_os()));
}
