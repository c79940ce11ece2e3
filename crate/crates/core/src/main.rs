fn main() {
    std::process::exit(qirc::cli::main_with_args(std::env::args_os()));
}
