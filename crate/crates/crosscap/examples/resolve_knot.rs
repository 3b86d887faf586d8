//! Resolve one knot end to end and dump its certificates.
//!
//! ```bash
//! cargo run -p crosscap --example resolve_knot            # defaults to 8_18
//! cargo run -p crosscap --example resolve_knot -- 9_40
//! ```

use crosscap::dataset::{render_certificates, run_single, Dataset};
use crosscap::embed::SearchBudget;
use std::path::Path;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "8_18".to_string());
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let dataset = Dataset::load(&data).expect("shipped dataset loads");
    let report = run_single(&dataset, &name, SearchBudget::default()).expect("knot resolves");
    print!("{}", render_certificates(&report.knots[0]));
}
