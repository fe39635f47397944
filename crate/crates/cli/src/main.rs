fn main() {
    std::process::exit(photosocial_cli::run(std::env::args_os().skip(1)));
}
