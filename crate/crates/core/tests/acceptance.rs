//! Acceptance run: every criterion of the verification suite, one line each.
//!
//! A criterion passes when all of its records are `pass` or
//! `conjectural-pass` (conjectural statements must still hold here) and it
//! stays within its time budget. Runs with the full suite options (no
//! skipped checks); criteria run on separate threads.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use affine_fermionic::suite::{run_criterion, CheckRecord, Status, SuiteOptions, CRITERIA, DILOG_CLOSED_FORM_TOL, DILOG_TOL};

/// Wall-clock budgets per criterion (1-based); `None` means no budget.
fn budget(i: usize) -> Option<Duration> {
    match i {
        1 => Some(Duration::from_secs(30)),
        5 => Some(Duration::from_secs(300)),
        _ => None,
    }
}

fn main() -> ExitCode {
    let opts = SuiteOptions { quick: false, ..SuiteOptions::default() };
    println!("acceptance: dilog tolerance {:e}, closed forms {:e}, seed {}", DILOG_TOL, DILOG_CLOSED_FORM_TOL, opts.seed);
    let results: Vec<(Vec<CheckRecord>, Duration)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=CRITERIA.len())
            .map(|i| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let records = run_criterion(i, &opts);
                    (records, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });
    let mut failed = 0;
    for (i, (records, elapsed)) in results.iter().enumerate() {
        let i = i + 1;
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        let bad: Vec<&CheckRecord> =
            records.iter().filter(|r| !matches!(r.status, Status::Pass | Status::ConjecturalPass)).collect();
        let in_budget = budget(i).is_none_or(|b| *elapsed <= b);
        let ok = !records.is_empty() && bad.is_empty() && in_budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({} pass, {} conjectural-pass, {} other; {:.1} s{})",
            i,
            CRITERIA[i - 1],
            if ok { "PASS" } else { "FAIL" },
            count(Status::Pass),
            count(Status::ConjecturalPass),
            bad.len(),
            elapsed.as_secs_f64(),
            if in_budget { String::new() } else { format!(", over budget {:?}", budget(i).unwrap()) },
        );
        for r in bad {
            println!("    {} {}: {}", r.status.as_str(), r.check_id, r.details);
        }
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
