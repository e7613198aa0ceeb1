use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = elab_cli::main_with(&argv, &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
