//! Resolve every knot in the shipped tables and print the genus table.
//!
//! ```bash
//! cargo run -p crosscap --example full_table
//! ```

use crosscap::dataset::{render_table, run_table, Dataset};
use crosscap::embed::SearchBudget;
use std::path::Path;
use std::time::Instant;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dataset = Dataset::load(&data).expect("shipped dataset loads");
    let start = Instant::now();
    let report = run_table(&dataset, SearchBudget::default(), 1).expect("table resolves");
    print!("{}", render_table(&report));
    println!("wall time: {:.3}s", start.elapsed().as_secs_f64());
}
