//! Acceptance criteria 1-9 at full schedules; one line per criterion.

use std::path::PathBuf;
use std::process::ExitCode;

use asympolar_cli::selftest::{run_criterion, SelftestConfig};

fn main() -> ExitCode {
    let mut cfg = SelftestConfig::full(42);
    cfg.exe = Some(PathBuf::from(env!("CARGO_BIN_EXE_asympolar")));
    let mut failed = Vec::new();
    for criterion in 1..=9u8 {
        let outcomes = run_criterion(criterion, &cfg);
        let passed = outcomes.iter().all(|o| o.passed);
        let detail: Vec<String> = outcomes.iter().map(|o| format!("{}: {}", o.suite, o.detail)).collect();
        println!(
            "criterion {criterion}: {} | {}",
            if passed { "PASS" } else { "FAIL" },
            detail.join(" | ")
        );
        if !passed {
            failed.push(criterion);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
