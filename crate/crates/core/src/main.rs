use std::io::Write;

fn main() {
    let outcome = gadgetcheck::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    for line in &outcome.stderr {
        eprintln!("{line}");
    }
    std::process::exit(outcome.exit_code);
}
