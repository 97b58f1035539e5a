fn main() {
    std::process::exit(wsn_energy::cli::main());
}
