//! Acceptance gate. Runs every numbered criterion at its stated tolerance,
//! prints one PASS/FAIL line per criterion with the measured values beneath
//! it, and exits non-zero if any criterion fails.

use std::process::ExitCode;

use rsl_runner::verify::{self, Check};

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("tightness under dephasing", verify::tightness_under_dephasing),
        ("depolarising hierarchy", verify::depolarising_hierarchy),
        ("non-monotonic dephasing", verify::non_monotonic_dephasing),
        ("non-monotonic depolarising", verify::non_monotonic_depolarising),
        ("thermalisation", verify::thermalisation),
        ("validity sweep", verify::validity_sweep),
        ("numerical cross-checks", verify::numerical_cross_checks),
        ("oracle and search", verify::oracle_and_search),
        ("dissipator control", verify::dissipator_control),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let check = run();
        print!("{check}");
        ran += 1;
        if !check.passed {
            failed.push(check.id);
        }
    }
    println!("\nacceptance: {} of {ran} passed", ran - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
