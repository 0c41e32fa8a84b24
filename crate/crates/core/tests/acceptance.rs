use hecke_core::acceptance::{self, case_c_sweep, DEFAULT_SEED};

#[test]
fn acceptance_criteria() {
    let reports = acceptance::run_all(DEFAULT_SEED);
    for r in &reports {
        println!("{}", r.line());
        for f in r.failures.iter().skip(1) {
            println!("    {f}");
        }
    }
    let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!(
        "acceptance: {} passed, {} failed",
        reports.len() - failed.len(),
        failed.len()
    );
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

/// Rewrites the tensor discrepancy fixture. Run with
/// `HECKE_WRITE_FIXTURES=1 cargo test --test acceptance -- --ignored`.
#[test]
#[ignore]
fn regenerate_tensor_fixture() {
    if std::env::var_os("HECKE_WRITE_FIXTURES").is_none() {
        return;
    }
    let (_, tensor, _) = case_c_sweep().unwrap();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/tensor_discrepancies.json");
    let mut text = serde_json::to_string_pretty(&tensor).unwrap();
    text.push('\n');
    std::fs::write(path, text).unwrap();
}
