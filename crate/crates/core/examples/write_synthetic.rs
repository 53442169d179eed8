// SPDX-License-Identifier: MIT OR Apache-2.0

//! Writes the seeded three-family synthetic dataset as a UCR file.
//!
//! `cargo run --example write_synthetic -- OUT_TRAIN [offset] [seed]`

use std::path::PathBuf;

use ts3c::dataset_io::write_ucr;
use ts3c::synthetic::{piecewise_linear_families, FamilySpec};

fn main() -> Result<(), ts3c::Error> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "synthetic3_TRAIN".into()));
    let offset = args.next().and_then(|v| v.parse().ok()).unwrap_or(0.0);
    let seed = args.next().and_then(|v| v.parse().ok()).unwrap_or(7);
    let data = piecewise_linear_families(FamilySpec {
        offset,
        seed,
        ..FamilySpec::default()
    })?;
    write_ucr(&data, &out)?;
    println!("wrote {} series to {}", data.len(), out.display());
    Ok(())
}
