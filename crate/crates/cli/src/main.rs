fn main() {
    std::process::exit(nonsmooth_lab_cli::run(std::env::args_os()));
}
