fn main() {
    std::process::exit(affine_split::harness::run_cli(std::env::args_os()));
}
