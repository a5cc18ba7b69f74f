use clap::Parser;

use solvcohom_cli::{main_with, Args};

fn main() {
    let args = Args::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = main_with(&args, &mut out) {
        eprintln!("solvcohom: {e}");
        std::process::exit(e.code);
    }
}
