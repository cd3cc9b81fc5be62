use std::io::Write;

fn main() {
    let inv = jordan_bell::cli::run_from(std::env::args_os());
    print!("{}", inv.stdout);
    eprint!("{}", inv.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(inv.code);
}
