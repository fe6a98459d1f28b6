fn main() -> std::process::ExitCode {
    book_impact::cli::main()
}
