use std::io::Write;
use std::process::ExitCode;

use finitist_cli::{emit_report, run};

fn main() -> ExitCode {
    let (report, format) = match run(std::env::args_os()) {
        Ok(r) => r,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (out, err) = emit_report(&report, format);
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    let _ = std::io::stderr().lock().write_all(err.as_bytes());
    ExitCode::from(report.exit)
}
