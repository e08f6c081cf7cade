use clap::Parser;

fn main() {
    let cli = bivexp::cli::Cli::parse();
    std::process::exit(bivexp::cli::run(cli));
}
