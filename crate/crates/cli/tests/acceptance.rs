use cogrowth_cli::verify::{run_suite, Suite};

#[test]
fn acceptance() {
    let checks = run_suite(Suite::Full);
    for c in &checks {
        println!("{c}");
    }
    println!();
    for &id in Suite::Full.criteria() {
        let of: Vec<_> = checks.iter().filter(|c| c.criterion == id).collect();
        let failed = of.iter().filter(|c| !c.passed).count();
        let status = if failed == 0 { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {id}: {} of {} checks passed",
            of.len() - failed,
            of.len()
        );
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
    assert!(
        failed.is_empty(),
        "{} checks failed:\n{}",
        failed.len(),
        failed.join("\n")
    );
}
