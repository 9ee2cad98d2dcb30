fn main() {
    std::process::exit(nosig::cli::run());
}
