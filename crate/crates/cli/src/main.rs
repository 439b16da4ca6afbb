use clap::Parser;
use ecsusy_cli::args::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let code = execute(
        &cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
