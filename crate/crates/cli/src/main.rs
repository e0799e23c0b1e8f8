use clap::Parser;

fn main() {
    let cli = vvwave_cli::Cli::parse();
    std::process::exit(vvwave_cli::run_cli(&cli));
}
