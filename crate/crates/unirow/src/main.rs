use clap::Parser;

fn main() {
    let cli = unirow::cli::Cli::parse();
    std::process::exit(unirow::cli::run(cli));
}
