//! Closed-form k-local geodesics through a fixed endpoint response.

use qwc::algebra::{penalty_metric, Algebra, DIM};
use qwc::complexity::{euler_arnold_residual, geodesic_path, ResponseVector};

fn main() -> qwc::Result<()> {
    let alg = Algebra::shared();
    let v = ResponseVector {
        v: std::array::from_fn(|i| ((i + 1) as f64 * 0.7).sin() * 0.5),
        identity_trace: 0.0,
    };
    let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    for k in 1..=4 {
        let path = geodesic_path(&v, &penalty_metric(k, 10.0)?, &alg.f)?;
        let start = path.at(0.0);
        let moved = (0..DIM).filter(|&i| (start[i] - v.v[i]).abs() > 1e-12).count();
        println!(
            "k={k} components moved {moved:>2} speed^2 {:.6} -> {:.6} residual {:.1e}",
            path.speed_sqr(0.0),
            path.speed_sqr(1.0),
            euler_arnold_residual(&path, &alg.f, &grid, 1e-5),
        );
    }
    Ok(())
}
