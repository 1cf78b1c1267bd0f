use clap::Parser;

use planck_radiation::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = execute(&cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
