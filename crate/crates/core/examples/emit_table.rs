//! Regenerate the shipped table file from the built-in rows.
//!
//! `cargo run --example emit_table [csv|json] > data/table1.csv`

use pagecert::search::{emit_table, published_table, TableFormat};

fn main() {
    let format = match std::env::args().nth(1).as_deref() {
        None | Some("csv") => TableFormat::Csv,
        Some("json") => TableFormat::Json,
        Some(other) => {
            eprintln!("unknown format `{other}` (expected csv or json)");
            std::process::exit(2);
        }
    };
    print!("{}", emit_table(published_table(), format).expect("built-in rows are well formed"));
}
