fn main() {
    std::process::exit(moire_core::cli::main_exit_code());
}
