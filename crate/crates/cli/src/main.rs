use std::io::Write;

fn main() {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = gridfloer_cli::run(std::env::args_os(), &mut out, &mut err);
    out.flush().ok();
    std::process::exit(code);
}
