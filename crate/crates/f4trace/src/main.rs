fn main() {
    std::process::exit(f4trace::cli::dispatch(std::env::args_os()));
}
