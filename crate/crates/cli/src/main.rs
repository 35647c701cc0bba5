fn main() {
    std::process::exit(modsphere_cli::run());
}
