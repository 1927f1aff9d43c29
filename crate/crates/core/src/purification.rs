//! Coin-space reduced density matrix and its canonical two-qubit purification.

use crate::error::{Error, Result};
use crate::numerics::{c64, hermitian_eigen_2x2, hermiticity_residual, kron_vec2, Mat2, Vec4};
use crate::walk::WalkState;

#[derive(Clone, Debug, PartialEq)]
pub struct CoinDensity {
    pub rho: Mat2,
}

impl CoinDensity {
    /// Validates Hermiticity, unit trace and positivity (1e-12 slack).
    pub fn new(rho: Mat2) -> Result<Self> {
        let h = hermiticity_residual(&rho);
        if h > 1e-12 {
            return Err(Error::NotHermitian(h));
        }
        let tr = rho.trace();
        if (tr - c64(1., 0.)).norm() > 1e-12 {
            return Err(Error::InvalidParameter(format!("density trace is {tr}")));
        }
        let spec = hermitian_eigen_2x2(&rho)?;
        if spec.eigenvalues[1] < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "density has negative eigenvalue {}",
                spec.eigenvalues[1]
            )));
        }
        Ok(CoinDensity { rho })
    }

    pub fn determinant(&self) -> f64 {
        self.rho.determinant().re
    }

    /// `λ± = (1 ± √(1 - 4 det ρ)) / 2`, with `1 - 4 det ρ` evaluated as
    /// `(ρ↑↑ - ρ↓↓)² + 4|ρ↑↓|²` (equal at unit trace, no cancellation near I/2).
    pub fn closed_form_eigenvalues(&self) -> [f64; 2] {
        let d = self.rho[(0, 0)].re - self.rho[(1, 1)].re;
        let r = (d * d + 4.0 * self.rho[(0, 1)].norm_sqr()).sqrt();
        [0.5 * (1.0 + r), 0.5 * (1.0 - r)]
    }

    /// Von Neumann entropy of ρ itself.
    pub fn entropy(&self, base: LogBase) -> f64 {
        let spec = hermitian_eigen_2x2(&self.rho).expect("validated density");
        entropy_of(&spec.eigenvalues, base)
    }
}

/// Canonically purified state `√λ₊|ψ₊ψ₊⟩ + √λ₋|ψ₋ψ₋⟩` in the basis ↑↑, ↑↓, ↓↑, ↓↓.
#[derive(Clone, Debug, PartialEq)]
pub struct PurifiedState {
    pub phi: Vec4,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

fn entropy_of(eigenvalues: &[f64], base: LogBase) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    match base {
        LogBase::Natural => s,
        LogBase::Two => s / std::f64::consts::LN_2,
    }
}

/// Trace out the walker position.
pub fn reduce(s: &WalkState) -> CoinDensity {
    let a = s.up_amplitudes();
    let b = s.down_amplitudes();
    let up_up: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let up_down = a.iter().zip(b).fold(c64(0., 0.), |acc, (x, y)| acc + x * y.conj());
    CoinDensity {
        rho: Mat2::new(
            c64(up_up, 0.),
            up_down,
            up_down.conj(),
            c64(1.0 - up_up, 0.),
        ),
    }
}

pub fn purify(rho: &CoinDensity) -> PurifiedState {
    let spec = hermitian_eigen_2x2(&rho.rho).expect("coin density is Hermitian");
    let lp = spec.eigenvalues[0].max(0.0);
    let lm = spec.eigenvalues[1].max(0.0);
    let vp = spec.vector(0);
    let vm = spec.vector(1);
    let phi = kron_vec2(&vp, &vp) * c64(lp.sqrt(), 0.) + kron_vec2(&vm, &vm) * c64(lm.sqrt(), 0.);
    PurifiedState {
        phi,
        lambda_plus: spec.eigenvalues[0],
        lambda_minus: spec.eigenvalues[1],
    }
}

/// Reduced state of the first slot, tracing out the ancilla copy.
pub fn partial_trace_2(phi: &Vec4) -> Mat2 {
    Mat2::from_fn(|i, k| (0..2).fold(c64(0., 0.), |acc, j| acc + phi[2 * i + j] * phi[2 * k + j].conj()))
}

/// Entanglement of purification `-tr ρ_pr log ρ_pr`.
pub fn eop(phi: &PurifiedState, base: LogBase) -> f64 {
    let rho = partial_trace_2(&phi.phi);
    let spec = hermitian_eigen_2x2(&rho).expect("partial trace is Hermitian");
    entropy_of(&spec.eigenvalues, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;
    use crate::walk::{evolve, initial_state, step};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, LN_2};

    fn e(i: usize) -> Vec4 {
        Vec4::from_fn(|r, _| if r == i { c64(1., 0.) } else { c64(0., 0.) })
    }

    #[test]
    fn reduce_initial_state() {
        let rho = reduce(&initial_state(0.3));
        let expect = Mat2::new(c64(0.5, 0.), c64(0., -0.5), c64(0., 0.5), c64(0.5, 0.));
        assert!(max_abs_diff(&rho.rho, &expect) < 1e-15);
    }

    #[test]
    fn reduce_after_one_step_is_maximally_mixed() {
        let rho = reduce(&step(&initial_state(FRAC_PI_4)));
        assert!(max_abs_diff(&rho.rho, &(Mat2::identity() * c64(0.5, 0.))) < 1e-15);
    }

    #[test]
    fn pure_density_purifies_to_product() {
        let rho = reduce(&initial_state(FRAC_PI_4));
        let p = purify(&rho);
        let v = Vec4::new(
            c64(0.5, 0.),
            c64(0., 0.5),
            c64(0., 0.5),
            c64(-0.5, 0.),
        );
        assert!((p.phi - v).norm() < 1e-14);
        assert!(eop(&p, LogBase::Natural).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_purifies_to_bell_state() {
        let rho = CoinDensity::new(Mat2::identity() * c64(0.5, 0.)).unwrap();
        let p = purify(&rho);
        let bell = (e(0) + e(3)) * c64(FRAC_1_SQRT_2, 0.);
        assert!((p.phi - bell).norm() < 1e-15);
        assert!((eop(&p, LogBase::Natural) - LN_2).abs() < 1e-14);
        assert!((eop(&p, LogBase::Two) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let product = partial_trace_2(&e(0));
        assert_eq!(product, Mat2::new(c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(0., 0.)));
        let bell = (e(0) + e(3)) * c64(FRAC_1_SQRT_2, 0.);
        assert!(max_abs_diff(&partial_trace_2(&bell), &(Mat2::identity() * c64(0.5, 0.))) < 1e-15);
    }

    #[test]
    fn invalid_density_rejected() {
        let bad = Mat2::new(c64(1., 0.), c64(1., 0.), c64(0., 0.), c64(0., 0.));
        assert!(CoinDensity::new(bad).is_err());
        let neg = Mat2::new(c64(1.5, 0.), c64(0., 0.), c64(0., 0.), c64(-0.5, 0.));
        assert!(CoinDensity::new(neg).is_err());
    }

    #[test]
    fn round_trip_on_walk() {
        for theta in [0.0, FRAC_PI_4 / 2.0, FRAC_PI_4, 2.0 * std::f64::consts::PI / 3.0] {
            for s in evolve(theta, 30) {
                let rho = reduce(&s);
                CoinDensity::new(rho.rho).unwrap();
                let p = purify(&rho);
                assert!((p.phi.norm() - 1.0).abs() < 1e-12);
                assert!(max_abs_diff(&partial_trace_2(&p.phi), &rho.rho) < 1e-10);
                let cf = rho.closed_form_eigenvalues();
                // √(1 - 4 det) is ill-conditioned near pure states.
                assert!((cf[0] - p.lambda_plus).abs() < 1e-12);
                assert!((cf[1] - p.lambda_minus).abs() < 1e-12);
                assert!((p.lambda_plus * p.lambda_minus - rho.determinant()).abs() < 1e-12);
                let s_eop = eop(&p, LogBase::Natural);
                assert!((0.0..=LN_2 + 1e-12).contains(&s_eop));
                assert!((s_eop - rho.entropy(LogBase::Natural)).abs() < 1e-10);
            }
        }
    }
}
