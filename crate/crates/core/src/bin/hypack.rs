fn main() { std::process::exit(hypack::cli::main()); }
