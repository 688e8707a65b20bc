use std::io::Write;

fn main() {
    env_logger::init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = fuzzy_rulegen::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
