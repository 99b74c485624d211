fn main() -> std::process::ExitCode {
    nilweyl::cli::main()
}
