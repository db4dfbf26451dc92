fn main() {
    std::process::exit(minshare::cli::run());
}
