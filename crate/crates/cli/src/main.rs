fn main() {
    std::process::exit(fracalc_cli::run(std::env::args_os()));
}
