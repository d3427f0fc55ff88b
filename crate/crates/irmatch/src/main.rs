use clap::Parser;

fn main() {
    let cli = irmatch::cli::Cli::parse();
    if let Err(err) = irmatch::cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(irmatch::cli::exit_code(&err));
    }
}
