use std::process::exit;

fn main() {
    exit(slabnet::cli::run());
}
