fn main() {
    let mut stdout = std::io::stdout().lock();
    std::process::exit(swapwire::cli::run_from_args(std::env::args_os(), &mut stdout));
}
