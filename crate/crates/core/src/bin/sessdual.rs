use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code =
        session_duality::cli::run(std::env::args_os(), &mut io::stdin().lock(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(u8::try_from(code).unwrap_or(2))
}
