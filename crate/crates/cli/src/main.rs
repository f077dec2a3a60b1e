fn main() {
    std::process::exit(vhunt_cli::run(std::env::args_os()));
}
