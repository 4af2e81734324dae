use clap::Parser;

fn main() {
    let cfg = ksrelax_cli::RunConfig::parse();
    std::process::exit(ksrelax_cli::execute(&cfg));
}
