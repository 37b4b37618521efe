//! Prints the 200-slot action catalog as CSV, followed by its hash on stderr.
//!
//!     cargo run --example action_catalog > docs/action_catalog.csv

use chefs_hat::action_space::{catalog_csv, catalog_hash};

fn main() {
    print!("{}", catalog_csv());
    eprintln!("sha256 {}", catalog_hash());
}
