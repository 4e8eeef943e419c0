fn main() -> std::process::ExitCode {
    bergman::cli::main()
}
