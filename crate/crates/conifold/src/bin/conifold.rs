fn main() {
    std::process::exit(conifold::cli::run(std::env::args_os()));
}
