//! Ordinary elliptic isogeny classes over F_p weighted by `H(t^2 - 4p)`.
//!
//! For each prime, prints the class count against `4 (1 - 1/p) sqrt p`, the
//! total variation distance of the weighted trace histogram to the semicircle,
//! and the smallest share of curves with endomorphism ring `Z[pi]`.
//!
//! ```text
//! cargo run --release --example elliptic_census [-- P ...]
//! ```

use strata::census::{enumerate_ec, minus_fraction_scan, summarize, DEFAULT_BINS};

fn main() -> strata::Result<()> {
    let mut primes: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if primes.is_empty() {
        primes = vec![101, 1009, 10007];
    }
    println!(
        "{:>7} {:>6} {:>10} {:>8} {:>9} {:>20}",
        "p", "classes", "predicted", "curves", "tv", "min h/H"
    );
    for p in primes {
        let rows = enumerate_ec(p)?;
        let s = summarize(&rows, DEFAULT_BINS)?;
        let scan = minus_fraction_scan(p)?;
        let min = &scan[0];
        println!(
            "{:>7} {:>6} {:>10.3} {:>8} {:>9.6} {:>12} at t = {}",
            p, s.class_count, s.predicted_class_count, s.curve_total, s.tv_to_semicircle, min.fraction, min.t
        );
    }
    Ok(())
}
