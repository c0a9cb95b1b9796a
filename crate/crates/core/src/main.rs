fn main() {
    std::process::exit(llc_entropy::cli::run(std::env::args_os()));
}
