//! Class numbers of quadratic orders: form enumeration, the conductor formula,
//! Kronecker sums and real quadratic units.
//!
//! ```text
//! cargo run --example class_numbers
//! ```

use num_bigint::BigInt;
use strata::quadratic::{
    class_number_by_formula, class_number_imaginary, h_over_h_bound, stratified_class_numbers, QuadClassData,
};

fn main() -> strata::Result<()> {
    for d in [-23i64, -112, -3 * 4 * 25, -4 * 81, -7 * 64] {
        let d = BigInt::from(d);
        let data = QuadClassData::compute(&d)?;
        let (frac, bound) = h_over_h_bound(&d)?;
        let by_formula = class_number_by_formula(&data.disc.delta0, &data.disc.conductor)?;
        println!(
            "D = {d}: D0 = {}, F = {}, h = {} (formula {by_formula}), H = {}, h/H = {frac} <= {bound}",
            data.disc.delta0,
            data.disc.conductor,
            class_number_imaginary(&d)?,
            data.kronecker_h.unwrap()
        );
        for (f, h) in stratified_class_numbers(&d)? {
            println!("    conductor {f}: h = {h}");
        }
    }
    for d in [5i64, 8, 12, 92, 229] {
        let data = QuadClassData::compute(&BigInt::from(d))?;
        println!(
            "D = {d}: h = {}, h+ = {}, unit = {} of norm {}",
            data.h,
            data.hplus.unwrap(),
            data.fundamental_unit.unwrap(),
            data.unit_norm.unwrap()
        );
    }
    Ok(())
}
