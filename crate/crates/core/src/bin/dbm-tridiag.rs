fn main() -> std::process::ExitCode {
    dbm_tridiag::cli::main()
}
