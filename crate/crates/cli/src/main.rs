use clap::Parser;

fn main() {
    let cli = bpa_cli::Cli::parse();
    std::process::exit(bpa_cli::run(&cli));
}
