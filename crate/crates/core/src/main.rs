fn main() -> std::process::ExitCode {
    ep_spectra::cli::run()
}
