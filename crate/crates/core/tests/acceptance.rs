//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rauzy_core::verify::{run, CRITERIA};

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let outcome = run(id);
        println!("{}", outcome.line());
        if !outcome.passed {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {} passed, {} failed {:?} in {:.1}s",
        CRITERIA.len() - failed.len(),
        failed.len(),
        failed,
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
