fn main() {
    std::process::exit(iid::cli::run());
}
