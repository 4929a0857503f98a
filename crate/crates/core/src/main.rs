fn main() -> std::process::ExitCode {
    lugsail::cli::main()
}
