fn main() {
    let env_tol = std::env::var("LOGRS_TOL").ok();
    let code = logrs_cli::main_with(
        std::env::args_os(),
        &mut std::io::stdin(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
        env_tol.as_deref(),
    );
    std::process::exit(code);
}
