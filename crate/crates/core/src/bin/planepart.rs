fn main() {
    let stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let code = planepart::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr);
    std::process::exit(code);
}
