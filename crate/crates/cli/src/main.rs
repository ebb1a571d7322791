use clap::Parser;

fn main() {
    let cli = sesq_cli::Cli::parse();
    std::process::exit(sesq_cli::run(&cli));
}
