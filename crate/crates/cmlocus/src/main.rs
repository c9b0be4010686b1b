use std::io::Write;

fn main() {
    let out = cmlocus::cli::run(std::env::args_os(), std::env::var_os(cmlocus::cli::OUT_DIR_ENV).map(Into::into));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
