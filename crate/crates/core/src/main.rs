fn main() {
    std::process::exit(gkdna::cli::run());
}
