//! Min-over-samples cost of the target unitary at each step, for k = 1..4.

use std::f64::consts::FRAC_PI_4;

use qwc::algebra::penalty_metric;
use qwc::complexity::{direct_complexity, fit_slope};

fn main() -> qwc::Result<()> {
    for k in 1..=4 {
        let p = penalty_metric(k, 100.0)?;
        let r = direct_complexity(FRAC_PI_4, 30, &p, 200, 7)?;
        let fit = fit_slope(&r.values())?;
        println!("k={k} mean {:.4} slope {:+.4}", r.mean(), fit.alpha);
    }
    Ok(())
}
