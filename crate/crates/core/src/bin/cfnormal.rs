fn main() {
    std::process::exit(cfnormal::cli::main());
}
