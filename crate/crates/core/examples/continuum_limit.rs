//! Momentum-cutoff complexity of the two-particle Dirac limit.

use std::f64::consts::FRAC_PI_4;

use qwc::continuum::{asymptotic_scale, continuum_complexity, continuum_response, spectral_response};

fn main() -> qwc::Result<()> {
    let (a, b) = (continuum_response(1.2, -0.4, FRAC_PI_4, 1.0), spectral_response(1.2, -0.4, FRAC_PI_4, 1.0));
    println!("closed form v10 {:.12} v15 {:.12}", a.v10, a.v15);
    println!("eigen oracle v10 {:.12} v15 {:.12}", b.v10, b.v15);
    for cutoff in [10.0, 20.0, 40.0, 80.0] {
        let c = continuum_complexity(cutoff, FRAC_PI_4, 1.0, 400)?;
        println!(
            "cutoff {cutoff:>4} C {c:>12.2} C/L^3 {:.5} C/(L^3 log L) {:.5}",
            c / cutoff.powi(3),
            c / asymptotic_scale(cutoff, 1.0) * 5.0 / 24.0
        );
    }
    Ok(())
}
