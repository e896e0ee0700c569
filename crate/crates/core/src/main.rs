use clap::Parser;

use tasc::cli::{run, Cli, Console};

fn main() {
    let cli = Cli::parse();
    let console = Console::from_env();
    let mut out = std::io::stdout().lock();
    if let Err(f) = run(cli, &console, &mut out) {
        let head = if f.code == 1 { console.paint("error", "31") } else { console.paint("error", "1;31") };
        eprintln!("{head}: {}", f.message);
        std::process::exit(f.code);
    }
}
