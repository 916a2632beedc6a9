use clap::Parser;
use narita_core::cli::{run, Args};

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = run(&args);
    print!("{}", outcome.output);
    std::process::exit(outcome.code);
}
