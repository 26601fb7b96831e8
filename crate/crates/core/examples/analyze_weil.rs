//! Full analysis of one isogeny class given by its Weil polynomial.
//!
//! Coefficients are listed in ascending degree, constant term first.
//!
//! ```text
//! cargo run --example analyze_weil [-- c0,c1,...,c2n q]
//! ```

use num_bigint::BigInt;
use strata::arith::IntPoly;
use strata::cli::analysis_report;

fn main() -> strata::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (coeffs, q) = match args.as_slice() {
        [c, q] => (c.clone(), q.clone()),
        _ => ("529,-138,32,-6,1".to_string(), "23".to_string()),
    };
    let coeffs: Vec<BigInt> = coeffs
        .split(',')
        .map(|c| c.trim().parse().expect("integer coefficient"))
        .collect();
    let q: BigInt = q.parse().expect("integer q");

    let report = analysis_report(IntPoly::new(coeffs), q)?;
    let spec = &report.spec;
    println!("f = {} over F_{}", spec.f(), spec.q());
    println!("g = {}", spec.g());
    println!("angles = {:?}", spec.angles());
    println!("Z[pi, pi-bar] convenient: {}", report.convenience.is_convenient);
    println!("h- estimate: {:.3}", report.h_minus_estimate);
    for s in &report.strata {
        println!(
            "{}: disc ratio {} (trig {:.6}), count {}, surjectivity {}",
            s.stratum,
            s.ratio_exact,
            s.ratio_trig,
            s.exact_count
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_else(|| format!("~{:.1}", s.estimate.unwrap_or(f64::NAN))),
            s.surjectivity
        );
    }
    Ok(())
}
