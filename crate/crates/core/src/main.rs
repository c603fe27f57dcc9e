use std::io::Write;

fn main() {
    let outcome = lowerk::cli::run(std::env::args_os());
    // a closed pipe on stdout is not an error worth reporting
    if !outcome.stdout.is_empty() {
        let _ = writeln!(std::io::stdout(), "{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", outcome.stderr);
    }
    std::process::exit(outcome.code);
}
