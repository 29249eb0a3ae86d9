fn main() {
    let code = critmp::cli::dispatch(std::env::args_os());
    std::process::exit(code);
}
