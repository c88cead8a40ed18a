use clap::Parser;

fn main() {
    let cli = wick_core::cli::Cli::parse();
    std::process::exit(wick_core::cli::run(cli));
}
