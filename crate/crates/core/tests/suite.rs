//! Suite plumbing: record ids, statuses, ordering and randomized instances.

use affine_fermionic::suite::*;

#[test]
fn records_are_canonical() {
    let opts = SuiteOptions::default();
    let mut all = Vec::new();
    for i in [1, 2, 3, 7, 8] {
        let recs = run_criterion(i, &opts);
        assert!(!recs.is_empty(), "criterion {}", i);
        let prefix = format!("c{:02}/", i);
        assert!(recs.iter().all(|r| r.check_id.starts_with(&prefix)));
        all.extend(recs);
    }
    let n = all.len();
    let report = SuiteReport::new(all.into_iter().rev().collect());
    assert_eq!(report.records.len(), n);
    assert!(report.records.windows(2).all(|w| w[0].check_id < w[1].check_id), "ids sorted and unique");
    assert!(!report.has_failure());
    let v = report.to_json();
    let first = &v["records"][0];
    for key in ["check_id", "paper_anchor", "status", "details"] {
        assert!(first.get(key).is_some(), "{}", key);
    }
    assert_eq!(v["summary"]["pass"].as_u64().unwrap() as usize + v["summary"]["conjectural-pass"].as_u64().unwrap_or(0) as usize, n);
    assert!(report.to_text().lines().last().unwrap().starts_with("summary:"));
}

#[test]
fn criterion_sizes() {
    let opts = SuiteOptions::default();
    assert_eq!(run_criterion(1, &opts).len(), 18);
    assert_eq!(run_criterion(2, &opts).len(), 8);
    assert_eq!(run_criterion(3, &opts).len(), 8);
    assert_eq!(run_criterion(7, &opts).len(), 30);
    // 15 algebras of rank ≤ 3 at three levels plus two closed forms.
    assert_eq!(run_criterion(8, &opts).len(), 47);
    assert!(run_criterion(11, &opts).is_empty());
}

#[test]
fn randomized_instances_are_reproducible_and_nontrivial() {
    let opts = SuiteOptions::default();
    let a = run_criterion(9, &opts);
    let b = run_criterion(9, &opts);
    assert_eq!(a.len(), 100);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.check_id, y.check_id);
        assert_eq!(x.details, y.details);
    }
    let skew: Vec<_> = a.iter().filter(|r| r.check_id.starts_with("c09/weyl-skew")).collect();
    assert_eq!(skew.len(), 50);
    assert!(skew.iter().all(|r| r.status == Status::ConjecturalPass));
    let nontrivial = skew.iter().filter(|r| r.details["nontrivial"] == true).count();
    assert!(nontrivial >= 15, "only {} non-trivial skew instances", nontrivial);
    let rec = a.iter().filter(|r| r.check_id.starts_with("c09/recursion")).count();
    assert_eq!(rec, 50);
    let other = run_criterion(9, &SuiteOptions { seed: 7, ..opts });
    assert!(other.iter().zip(&a).any(|(x, y)| x.details != y.details));
}

#[test]
fn quick_mode_skips_only_the_slow_case() {
    let recs = run_criterion(4, &SuiteOptions { quick: true, ..SuiteOptions::default() });
    let skipped: Vec<_> = recs.iter().filter(|r| r.status == Status::Skipped).collect();
    assert_eq!(skipped.len(), 1);
    assert_eq!(skipped[0].check_id, "c04/conjectured/E6~2/W2_3");
    assert!(recs.iter().all(|r| matches!(r.status, Status::Pass | Status::ConjecturalPass | Status::Skipped)));
}
