//! Profile of one huge uniform tree, in memory proportional to its height.
//!
//! `cargo run --release --example stream_large_profile -- 50000000 1 > profile.csv`

use std::io::{self, Write};
use std::time::Instant;

use ise_lab::tree::{rescale, stream_profile};

fn main() -> ise_lab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000_000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let start = Instant::now();
    let profile = stream_profile(n, seed)?;
    let elapsed = start.elapsed();
    let scale = (n as f64).powf(0.25);
    eprintln!(
        "n = {n}: abscissas {}..={}, width {} = {:.2} n^(1/4), max M = {}, {:.2?}",
        profile.ell(),
        profile.r(),
        profile.width(),
        profile.width() as f64 / scale,
        profile.max_count(),
        elapsed
    );

    let rescaled = rescale(&profile);
    eprintln!(
        "rescaled: max m = {:.4}, terminal s = {}",
        rescaled.max_m(),
        rescaled.terminal().s
    );
    let stdout = io::stdout();
    let mut out = stdout.lock();
    rescaled.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}
