fn main() {
    std::process::exit(freefermi_cli::main_with_args(std::env::args_os()));
}
