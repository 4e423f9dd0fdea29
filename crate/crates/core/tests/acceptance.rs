//! Acceptance battery: one PASS/FAIL line per criterion. All comparisons are
//! exact; the only tolerance is the grid each identity is checked on (pinned
//! in `gsdeform::suite`).

use std::process::ExitCode;

use gsdeform::suite::{run_criterion, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for &(n, _) in &CRITERIA {
        if filter.is_some_and(|x| x != n) {
            continue;
        }
        let r = run_criterion(n, DEFAULT_SEED).expect("known criterion");
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {n} {status}  {} ({:.1} s)", r.name, r.seconds);
        for line in &r.detail {
            println!("    {line}");
        }
        if !r.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
