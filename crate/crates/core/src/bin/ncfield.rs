fn main() {
    std::process::exit(ncfield::cli::main_from_env());
}
