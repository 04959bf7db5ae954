fn main() {
    std::process::exit(hyp_cli::run(std::env::args_os()));
}
