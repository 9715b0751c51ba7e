fn main() { std::process::exit(carnot_geo::cli::run()) }
