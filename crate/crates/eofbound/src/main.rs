use eofbound::cli;

fn main() {
    std::process::exit(cli::run());
}
