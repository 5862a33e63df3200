fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(mflab_cli::run(&argv));
}
