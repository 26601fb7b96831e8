//! Explicit quartic families over primes `p = 7 mod 8` with their discriminant
//! ratios and bound checks.
//!
//! ```text
//! cargo run --release --example family_sweeps [-- PMAX]
//! ```

use strata::ppav::{family_sweep, Family};

fn main() -> strata::Result<()> {
    let pmax = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    for family in Family::ALL {
        let members = family_sweep(family, pmax)?;
        println!("{} family, {} primes up to {pmax}", family.name(), members.len());
        for m in members.iter().take(4) {
            let p = m.p as f64;
            println!(
                "  p = {:>4}  f = {}  ratio = {}  ratio/p^(5/2) = {:.3}  ratio/p = {:.3}  {:?}",
                m.p,
                m.report.spec.f(),
                m.report.ratio_exact,
                m.report.ratio_trig / p.powf(2.5),
                m.report.ratio_trig / p,
                m.bound
            );
        }
    }
    Ok(())
}
