//! One line per acceptance criterion, then a single assertion over all of them.

use pseudometric::campaign::{run_all, CampaignConfig};

#[test]
fn acceptance_criteria() {
    let config = CampaignConfig { seed: 1, count: 500, max_n: 7, bound: 8 };
    let results = run_all(&config);
    for r in &results {
        println!(
            "[{}] AC{} {} ({} samples): {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.samples,
            r.detail
        );
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
