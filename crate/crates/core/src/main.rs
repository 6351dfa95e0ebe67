fn main() {
    std::process::exit(gksl_kit::cli::run());
}
