fn main() {
    std::process::exit(qcluster::cli::run());
}
