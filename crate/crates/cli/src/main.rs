fn main() {
    std::process::exit(spimg_cli::run(std::env::args_os()));
}
