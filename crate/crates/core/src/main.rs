fn main() {
    std::process::exit(matpoly::cli::run(std::env::args_os()));
}
