//! Stepwise slope across a 13-point coin-angle grid.

use qwc::algebra::penalty_metric;
use qwc::cli::parse_theta_grid;
use qwc::complexity::{slope_sweep, SelectRule};

fn main() -> qwc::Result<()> {
    let grid = parse_theta_grid("0:pi:13").unwrap();
    let p = penalty_metric(2, 100.0)?;
    for row in slope_sweep(&grid, 20, &p, 100, 7, SelectRule::Increment)? {
        println!(
            "theta {:.4} alpha {:.4} {}",
            row.theta,
            row.alpha,
            "*".repeat((row.alpha * 10.0) as usize)
        );
    }
    Ok(())
}
