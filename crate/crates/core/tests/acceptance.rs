use pfcirc::acceptance::{run_all, DEFAULT_SEED};

fn main() {
    let results = run_all(DEFAULT_SEED);
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert_eq!(results.len(), 9);
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
