//! `bpl` binary.

fn main() {
    std::process::exit(bpl_cli::run(std::env::args_os()));
}
