//! Cumulative complexity built from step-to-step unitaries.

use std::f64::consts::FRAC_PI_4;

use qwc::algebra::penalty_metric;
use qwc::complexity::{stepwise_run, SelectRule};

fn main() -> qwc::Result<()> {
    let p = penalty_metric(2, 100.0)?;
    for rule in [SelectRule::Increment, SelectRule::Direct] {
        let (r, _) = stepwise_run(FRAC_PI_4, 30, &p, 200, 7, rule)?;
        let fit = r.fit.unwrap();
        println!("{rule:?}: slope {:.4} intercept {:.4} r2 {:.5}", fit.alpha, fit.beta, fit.r2);
        for row in r.rows.iter().step_by(5) {
            println!("  t={:>2} increment {:.4} total {:.4}", row.t, row.value, row.cumulative.unwrap());
        }
    }
    Ok(())
}
