fn main() {
    std::process::exit(epsnet::cli::run());
}
