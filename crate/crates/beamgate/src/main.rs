fn main() {
    std::process::exit(beamgate::cli::run());
}
