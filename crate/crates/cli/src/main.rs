use std::io::Write;

use clap::Parser;

use ratectl_cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    let outcome = run(&cfg);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.status);
}
