use clap::Parser;

fn main() {
    let cli = hedetniemi::cli::Cli::parse();
    std::process::exit(hedetniemi::cli::run(cli));
}
