fn main() {
    std::process::exit(ewa_denoise::cli::run_cli(std::env::args_os()));
}
