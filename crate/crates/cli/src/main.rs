use clap::Parser;

fn main() {
    let cli = rbvar::Cli::parse();
    if let Err(e) = rbvar::main_with(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
