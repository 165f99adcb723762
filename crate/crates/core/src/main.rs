fn main() {
    std::process::exit(zeno_coupler::cli::main_with_args(std::env::args_os()));
}
