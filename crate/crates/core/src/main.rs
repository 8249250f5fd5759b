fn main() {
    std::process::exit(gw_commute::cli::run(std::env::args()));
}
