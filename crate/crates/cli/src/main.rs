fn main() {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = contour_duo_cli::run(std::env::args_os(), &mut lock);
    std::process::exit(code);
}
