use clap::Parser;
use confalg::cli::{run, Args};

fn main() {
    let args = Args::parse();
    let outcome = run(&args);
    print!("{}", outcome.render());
    std::process::exit(outcome.code);
}
