use std::io::Write;

fn main() {
    let out = bcft::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.text.as_bytes());
    std::process::exit(out.code);
}
