//! Convenience certificates for orders of a quartic CM field.
//!
//! Prints the certificate for `Z[pi, pi-bar]` of a random-looking class, then for
//! an order that is stable and has Gorenstein real subring but still fails, and
//! writes that order in the order-file format used by `strata convenient`.
//!
//! ```text
//! cargo run --example convenient_orders [-- OUT.json]
//! ```

use strata::orders::{inconvenient_example, FieldContext};
use strata::IsogenyClassSpec;

fn main() -> strata::Result<()> {
    let spec = IsogenyClassSpec::from_i64(&[529, -138, 32, -6, 1], 23)?;
    let ctx = FieldContext::new(&spec)?;
    let minimal = ctx.minimal_order()?;
    println!("f = {}", spec.f());
    println!("  Z[pi, pi-bar]: {:?}", ctx.convenient_certificate(&minimal)?);
    println!("  real subring: {:?}", ctx.real_sublattice(&minimal)?.hnf_rows());

    let (ctx, order) = inconvenient_example()?;
    let cert = ctx.convenient_certificate(&order)?;
    println!("f = {}", ctx.f());
    println!("  R: {cert:?}");
    println!("  R Gorenstein: {}", order.is_gorenstein()?);

    // B[pi] over the same real subring repairs it
    let real = ctx.real_sublattice(&order)?;
    let repaired = ctx.order_over_real(&real)?;
    println!("  B[pi]: {:?}", ctx.convenient_certificate(&repaired)?);

    let json = serde_json::to_string_pretty(&ctx.lattice_to_json(&order))?;
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}
