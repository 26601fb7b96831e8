//! Normalizing constants of the angle measures and a few density values.
//!
//! ```text
//! cargo run --release --example measures
//! ```

use std::f64::consts::PI;

use num_bigint::BigInt;
use strata::measures::{
    average_ppav_composed, average_ppav_estimate, density_mu, isogeny_class_count_estimate, measure_spec, NuConstant,
};

fn main() -> strata::Result<()> {
    for n in 1..=3 {
        let s = measure_spec(n)?;
        println!(
            "n = {n}: v_n = {}, c_n = {:.6}, d_n = {:.6} (mass {:.6}), effective d_n = {:.6}, mu mass = {:.9}",
            s.v_n, s.c_n, s.d_n_closed_form, s.nu_closed_form_mass, s.d_n_eff, s.mu_mass
        );
    }

    let q = BigInt::from(10007);
    println!(
        "isogeny classes, n = 1, q = 10007: ~{:.1}",
        isogeny_class_count_estimate(1, &q)?
    );
    let theta = [PI / 3.0, 2.0 * PI / 3.0];
    println!("mu_2{theta:.3?} = {:.6}", density_mu(&theta)?);
    let lit = average_ppav_estimate(2, &q, &theta)?;
    let comp = average_ppav_composed(2, &q, &theta, NuConstant::ClosedForm)?;
    println!(
        "average per class at {theta:.3?}: {lit:.3} (composed: {comp:.3}, ratio {:.6} = pi^4)",
        comp / lit
    );
    Ok(())
}
