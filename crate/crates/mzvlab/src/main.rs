fn main() {
    std::process::exit(mzvlab::cli::run());
}
