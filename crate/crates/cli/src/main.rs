fn main() {
    std::process::exit(ncdisc_cli::run(std::env::args_os()));
}
