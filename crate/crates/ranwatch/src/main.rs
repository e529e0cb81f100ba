fn main() {
    std::process::exit(ranwatch::cli::run());
}
