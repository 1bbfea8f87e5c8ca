fn main() {
    std::process::exit(entroq::cli::main());
}
