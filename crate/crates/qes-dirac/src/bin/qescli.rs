fn main() {
    std::process::exit(qes_dirac::cli::run());
}
