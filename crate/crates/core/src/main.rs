use std::io::Write;

use borel_workbench::clireport::{run_command, SEED_ENV};

fn main() {
    let env_seed = std::env::var(SEED_ENV).ok();
    let outcome = run_command(std::env::args_os(), env_seed.as_deref());
    std::io::stdout().write_all(&outcome.stdout).expect("stdout");
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
