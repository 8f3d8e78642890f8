fn main() {
    let code = variant_lab::cli::run(std::env::args_os());
    std::process::exit(code);
}
