use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = qdiv_cli::execute(std::env::args());
    if let Some(msg) = &outcome.message {
        if outcome.code == qdiv_cli::EXIT_PASS {
            print!("{msg}");
        } else {
            eprintln!("{}", msg.trim_end());
        }
    }
    if let Some(report) = &outcome.report {
        if !std::env::args().any(|a| a == "--out" || a.starts_with("--out=")) {
            println!("{}", report.to_json());
        }
    }
    ExitCode::from(outcome.code as u8)
}
