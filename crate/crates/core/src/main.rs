use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = sitoform::site_io::cli::run(
        std::env::args_os().collect(),
        &mut io::stdin(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(code as u8)
}
