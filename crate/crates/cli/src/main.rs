fn main() {
    std::process::exit(sqav_cli::main_entry());
}
