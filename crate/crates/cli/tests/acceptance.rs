//! Acceptance suite: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use voter_qsd_cli::checks;

fn main() -> ExitCode {
    let mut failed = 0;
    let total = checks::all().len();
    for criterion in checks::all() {
        let start = Instant::now();
        let o = criterion();
        println!("{} [{:.1} s]", o.line(), start.elapsed().as_secs_f64());
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of {total} criteria passed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
