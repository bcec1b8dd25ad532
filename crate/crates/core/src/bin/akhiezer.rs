use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("AKHIEZER_LOG")).init();
    let outcome = akhiezer::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
