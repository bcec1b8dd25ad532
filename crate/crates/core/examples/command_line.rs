// The command-line front end driven in process.
//
//     cargo run --example command_line

use akhiezer::cli::run as cli;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let out = cli(["akhiezer", "solve", "--alpha", "-0.3", "--beta", "0.4", "--degree", "3", "--format", "text"]);
    print!("{}", out.stdout);
    let out = cli(["akhiezer", "ladder", "--alpha", "-0.3", "--m", "1", "--format", "csv"]);
    print!("{}", out.stdout);
    let out = cli(["akhiezer", "solve", "--alpha", "0.5", "--beta", "0.2", "--degree", "3"]);
    println!("exit {}: {}", out.code, out.stderr.trim());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
