use std::io::Write;

fn main() {
    let (out, err, code) = pencil_lab_cli::run_args(std::env::args_os());
    if !out.is_empty() {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(out.as_bytes());
        let _ = stdout.flush();
    }
    if !err.is_empty() {
        eprint!("{err}");
    }
    std::process::exit(code);
}
