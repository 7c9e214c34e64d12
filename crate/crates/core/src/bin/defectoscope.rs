use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = defectoscope::cli::configure_threads() {
        eprintln!("warning: {e}");
    }
    let code = defectoscope::cli::main_with_args(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
