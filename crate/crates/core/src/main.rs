fn main() -> std::process::ExitCode {
    graph_energy::cli::main()
}
