fn main() {
    std::process::exit(tmwords_cli::run(std::env::args_os()));
}
