//! Response vectors, k-local Nielsen cost, geodesics and the complexity pipelines.

mod geodesic;
mod pipeline;

pub use geodesic::{euler_arnold_residual, geodesic_path, GeodesicPath};
pub use pipeline::{
    convergence_study, direct_complexity, slope_sweep, stepwise_complexity, stepwise_run,
    ComplexityReport, ConvergenceRow, Mode, SelectRule, SlopeRow, StepRow,
};

use serde::Serialize;

use crate::algebra::{GeneratorBasis, PenaltyMetric, DIM};
use crate::error::{Error, Result};
use crate::numerics::{principal_log_unitary, Mat4};

/// Coefficients `v_i` of `i log U = v_0 I + Σ v_i T_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResponseVector {
    pub v: [f64; DIM],
    /// `tr(i log U) / 4`, the identity part left out of `v`.
    pub identity_trace: f64,
}

impl ResponseVector {
    pub fn zero() -> Self {
        ResponseVector {
            v: [0.0; DIM],
            identity_trace: 0.0,
        }
    }

    /// `v_0 I + Σ v_i T_i`.
    pub fn hamiltonian(&self, basis: &GeneratorBasis) -> Mat4 {
        basis.combine(&self.v) + Mat4::identity() * crate::numerics::c64(self.identity_trace, 0.0)
    }
}

fn decompose(h: &Mat4, basis: &GeneratorBasis) -> Result<ResponseVector> {
    let (v, imag) = basis.project(h);
    if imag > 1e-9 {
        return Err(Error::NotHermitian(imag));
    }
    Ok(ResponseVector {
        v,
        identity_trace: h.trace().re / 4.0,
    })
}

/// Response of a special-unitary target via the principal logarithm.
pub fn extract_response(u: &Mat4, basis: &GeneratorBasis) -> Result<ResponseVector> {
    let det = u.determinant();
    let dev = (det - crate::numerics::c64(1.0, 0.0)).norm();
    if dev > 1e-10 {
        return Err(Error::NotSpecialUnitary(dev));
    }
    let log = principal_log_unitary(u)?;
    decompose(&log.hermitian, basis)
}

/// `H = i log U` for one step and its generator coefficients.
pub fn stepwise_hamiltonian(u_step: &Mat4, basis: &GeneratorBasis) -> Result<(Mat4, ResponseVector)> {
    let log = principal_log_unitary(u_step)?;
    let coeffs = decompose(&log.hermitian, basis)?;
    Ok((log.hermitian, coeffs))
}

/// `C = √(Σ_i c_i v_i²)`.
pub fn cost(v: &ResponseVector, p: &PenaltyMetric) -> f64 {
    let c = v
        .v
        .iter()
        .zip(&p.costs)
        .map(|(x, c)| c * x * x)
        .sum::<f64>()
        .sqrt();
    debug_assert!((c - grouped_cost(v, p)).abs() <= 1e-12 * c.max(1.0));
    c
}

fn sum_sq(v: &[f64; DIM], idx: impl IntoIterator<Item = usize>) -> f64 {
    idx.into_iter().map(|i| v[i] * v[i]).sum()
}

/// The same cost written sector by sector: easy sectors at weight one, hard
/// sectors at weight `1 + μ`.
pub fn grouped_cost(v: &ResponseVector, p: &PenaltyMetric) -> f64 {
    let w1 = 0..4;
    let w2 = 4..10;
    let w34 = 10..15;
    let x = &v.v;
    let hard = 1.0 + p.mu;
    let c2 = match p.k {
        1 => sum_sq(x, w1) + hard * (sum_sq(x, w2) + sum_sq(x, w34)),
        2 => sum_sq(x, w1.chain(w2)) + hard * sum_sq(x, w34),
        3 => sum_sq(x, 0..14) + hard * x[14] * x[14],
        _ => sum_sq(x, 0..DIM),
    };
    c2.sqrt()
}

/// Ordinary least-squares line through `(t, y_t)` for `t = 1, 2, ...`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub alpha: f64,
    pub beta: f64,
    pub r2: f64,
}

pub fn fit_slope(series: &[f64]) -> Result<LinearFit> {
    if series.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "slope fit needs at least 3 points, got {}",
            series.len()
        )));
    }
    let n = series.len() as f64;
    let tbar = (n + 1.0) / 2.0;
    let ybar = series.iter().sum::<f64>() / n;
    let (mut sty, mut stt) = (0.0, 0.0);
    for (i, &y) in series.iter().enumerate() {
        let dt = (i + 1) as f64 - tbar;
        sty += dt * (y - ybar);
        stt += dt * dt;
    }
    let alpha = sty / stt;
    let beta = ybar - alpha * tbar;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (i, &y) in series.iter().enumerate() {
        let pred = alpha * (i + 1) as f64 + beta;
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - ybar) * (y - ybar);
    }
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LinearFit { alpha, beta, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{penalty_metric, Algebra};
    use crate::numerics::{c64, exp_i_hermitian, max_abs_diff, C64};
    use crate::synthesis::fix_phase;

    fn basis() -> &'static GeneratorBasis {
        &Algebra::shared().basis
    }

    fn unit(i: usize, x: f64) -> ResponseVector {
        let mut v = [0.0; DIM];
        v[i] = x;
        ResponseVector {
            v,
            identity_trace: 0.0,
        }
    }

    #[test]
    fn identity_has_zero_response() {
        let r = extract_response(&Mat4::identity(), basis()).unwrap();
        assert!(r.v.iter().all(|x| x.abs() < 1e-15));
        assert_eq!(r.identity_trace, 0.0);
    }

    #[test]
    fn single_generator_response() {
        let u = exp_i_hermitian(&(basis().t[14] * c64(0.3, 0.)), 1.0);
        let r = extract_response(&u, basis()).unwrap();
        for i in 0..DIM {
            let expect = if i == 14 { 0.3 } else { 0.0 };
            assert!((r.v[i] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn response_round_trip() {
        let h = basis().combine(&std::array::from_fn(|i| 0.1 * (i as f64 - 7.0) / 3.0));
        let (u, _) = fix_phase(&exp_i_hermitian(&(h + Mat4::identity() * c64(0.2, 0.)), 1.0));
        let r = extract_response(&u, basis()).unwrap();
        let back = exp_i_hermitian(&r.hamiltonian(basis()), 1.0);
        assert!(max_abs_diff(&back, &u) < 1e-8);
    }

    #[test]
    fn non_special_unitary_rejected() {
        let u = Mat4::identity() * C64::from_polar(1.0, 0.1);
        assert!(matches!(
            extract_response(&u, basis()),
            Err(Error::NotSpecialUnitary(_))
        ));
    }

    #[test]
    fn cost_examples() {
        let p2 = penalty_metric(2, 55.0).unwrap();
        assert!((cost(&unit(4, 2.0), &p2) - 2.0).abs() < 1e-15);
        let p3 = penalty_metric(2, 3.0).unwrap();
        assert!((cost(&unit(10, 1.0), &p3) - 2.0).abs() < 1e-15);
        let v = ResponseVector {
            v: std::array::from_fn(|i| (i as f64).sin()),
            identity_trace: 0.0,
        };
        let euclid = v.v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for k in 1..=4 {
            let c = cost(&v, &penalty_metric(k, 0.0).unwrap());
            assert!((c - euclid).abs() < 1e-14);
        }
    }

    #[test]
    fn grouped_matches_weighted_sum() {
        let v = ResponseVector {
            v: std::array::from_fn(|i| (1.3 * i as f64).cos()),
            identity_trace: 0.0,
        };
        for k in 1..=4 {
            let p = penalty_metric(k, 100.0).unwrap();
            assert!((cost(&v, &p) - grouped_cost(&v, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn stepwise_hamiltonian_examples() {
        let (h, c) = stepwise_hamiltonian(&Mat4::identity(), basis()).unwrap();
        assert!(h.norm() < 1e-15);
        assert!(c.v.iter().all(|x| *x == 0.0));
        let u = exp_i_hermitian(&(basis().t[4] * c64(0.2, 0.)), 1.0);
        let (h, c) = stepwise_hamiltonian(&u, basis()).unwrap();
        assert!((c.v[4] - 0.2).abs() < 1e-12);
        assert!(max_abs_diff(&exp_i_hermitian(&h, 1.0), &u) < 1e-12);
    }

    #[test]
    fn fit_examples() {
        let lin: Vec<f64> = (1..=10).map(|t| 2.0 * t as f64 + 1.0).collect();
        let f = fit_slope(&lin).unwrap();
        assert!((f.alpha - 2.0).abs() < 1e-12);
        assert!((f.beta - 1.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        let flat = fit_slope(&[3.0; 5]).unwrap();
        assert_eq!(flat.alpha, 0.0);
        assert!(fit_slope(&[1.0, 2.0]).is_err());
    }
}
