//! How the spread of the sampled minimum shrinks with sample count.

use std::f64::consts::FRAC_PI_4;

use qwc::algebra::penalty_metric;
use qwc::complexity::convergence_study;

fn main() -> qwc::Result<()> {
    let p = penalty_metric(2, 100.0)?;
    for row in convergence_study(FRAC_PI_4, 10, &[10, 50, 200, 500], 32, &p, 7)? {
        println!("S={:>3} mean {:.4} stddev {:.4}", row.samples, row.mean, row.stddev);
    }
    Ok(())
}
