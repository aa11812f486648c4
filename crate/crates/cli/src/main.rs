use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let code = stepwaves_cli::main_with_args(std::env::args_os(), &mut out, &mut err);
    if let Err(e) = out.flush() {
        if e.kind() != io::ErrorKind::BrokenPipe && code == 0 {
            let _ = writeln!(err, "{}", serde_json::json!({"error": "io", "message": e.to_string()}));
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code as u8)
}
