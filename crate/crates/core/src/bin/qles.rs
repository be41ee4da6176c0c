fn main() -> std::process::ExitCode {
    qles_measure::cli::main()
}
