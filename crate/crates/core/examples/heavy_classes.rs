//! Elliptic isogeny classes where the minimal endomorphism ring holds only a
//! small share `h(D)/H(D)` of the curves.
//!
//! ```text
//! cargo run --release --example heavy_classes
//! ```

use strata::ppav::find_heavy_isogeny_class;

fn main() -> strata::Result<()> {
    for (m, d0) in [(2, -7), (3, -7), (2, -8), (6, -23), (30, -7)] {
        match find_heavy_isogeny_class(m, d0, 2_000) {
            Ok(h) => println!(
                "m = {m:>2}, D0 = {d0:>4}: p = {}, t = {}, D = {}, F = {}, h/H = {} <= {}",
                h.p, h.t, h.delta, h.conductor, h.ratio, h.bound
            ),
            Err(e) => println!("m = {m:>2}, D0 = {d0:>4}: {e}"),
        }
    }
    Ok(())
}
