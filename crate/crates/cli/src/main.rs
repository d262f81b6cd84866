fn main() {
    std::process::exit(nvdnp_cli::run());
}
