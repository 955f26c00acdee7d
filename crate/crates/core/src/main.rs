use clap::Parser;

use degbell::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
