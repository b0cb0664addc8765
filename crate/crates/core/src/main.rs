fn main() {
    std::process::exit(waveplate::cli::run_main(std::env::args_os()));
}
