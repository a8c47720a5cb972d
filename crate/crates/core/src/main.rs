fn main() {
    std::process::exit(hardy_core::cli::run_from_env());
}
