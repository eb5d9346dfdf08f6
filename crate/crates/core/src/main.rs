use std::process::ExitCode;

use clap::Parser;
use k2p2::cli::{main_with, Args};

fn main() -> ExitCode {
    main_with(Args::parse())
}
