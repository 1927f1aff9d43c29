//! Continuum limit: one- and two-particle Dirac Hamiltonians, their response
//! coefficients, and the momentum-cutoff complexity integral.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{c64, hermiticity_residual, kron2, pauli_y, Mat2, Mat4};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuumParams {
    pub theta: f64,
    pub t: f64,
    pub cutoff: f64,
}

impl ContinuumParams {
    pub fn mass(&self) -> f64 {
        self.theta.sin()
    }
}

/// `H(p) = p [[cos θ, sin θ], [sin θ, -cos θ]] + sin θ σ_y`.
pub fn dirac_hamiltonian(p: f64, theta: f64) -> Mat2 {
    dirac_hamiltonian_with_mass(p, theta, theta.sin())
}

/// As [`dirac_hamiltonian`] with the `σ_y` mass term set independently.
pub fn dirac_hamiltonian_with_mass(p: f64, theta: f64, m: f64) -> Mat2 {
    let (c, s) = (theta.cos(), theta.sin());
    let kinetic = Mat2::new(c64(c, 0.), c64(s, 0.), c64(s, 0.), c64(-c, 0.)) * c64(p, 0.);
    let h = kinetic + pauli_y() * c64(m, 0.);
    debug_assert!(hermiticity_residual(&h) <= 1e-12);
    h
}

/// `H(p1) ⊗ I + I ⊗ H(p2)`.
pub fn two_particle_hamiltonian(p1: f64, p2: f64, theta: f64) -> Mat4 {
    two_particle_with_mass(p1, p2, theta, theta.sin())
}

pub fn two_particle_with_mass(p1: f64, p2: f64, theta: f64, m: f64) -> Mat4 {
    let id = Mat2::identity();
    kron2(&dirac_hamiltonian_with_mass(p1, theta, m), &id)
        + kron2(&id, &dirac_hamiltonian_with_mass(p2, theta, m))
}

/// `(v5, v10, v15)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContinuumResponse {
    pub v5: f64,
    pub v10: f64,
    pub v15: f64,
}

/// `v10 = -(t/2)(R₋ + R₊)`, `v15 = (t/2)(R₋ - R₊)`, `v5 = 0`, where
/// `R±² = m² + p1² + p2² ± √((m² + 2p1²)(m² + 2p2²))` and `m = sin θ`.
pub fn continuum_response(p1: f64, p2: f64, theta: f64, t: f64) -> ContinuumResponse {
    let m2 = theta.sin().powi(2);
    let base = m2 + p1 * p1 + p2 * p2;
    let inner = ((m2 + 2.0 * p1 * p1) * (m2 + 2.0 * p2 * p2)).sqrt();
    let r_plus = (base + inner).sqrt();
    // R₋ R₊ = |p1² - p2²|
    let r_minus = if r_plus > 0.0 {
        (p1 * p1 - p2 * p2).abs() / r_plus
    } else {
        0.0
    };
    ContinuumResponse {
        v5: 0.0,
        v10: -0.5 * t * (r_minus + r_plus),
        v15: 0.5 * t * (r_minus - r_plus),
    }
}

/// Response from diagonalizing the two-particle Hamiltonian with mass `m/√2`
/// and expanding `t·diag(r₋, -r₋, r₊, -r₊)` in the diagonal generators
/// `T5 = diag(-1,-1,1,1)`, `T10 = diag(-1,1,-1,1)`, `T15 = diag(1,-1,-1,1)`.
pub fn spectral_response(p1: f64, p2: f64, theta: f64, t: f64) -> ContinuumResponse {
    let m = theta.sin() / std::f64::consts::SQRT_2;
    let h = two_particle_with_mass(p1, p2, theta, m);
    let mut e: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    let (r_minus, r_plus) = (e[2], e[3]);
    let d = [r_minus, -r_minus, r_plus, -r_plus];
    let expand = |diag: [f64; 4]| 0.25 * t * d.iter().zip(diag).map(|(x, y)| x * y).sum::<f64>();
    ContinuumResponse {
        v5: expand([-1., -1., 1., 1.]),
        v10: expand([-1., 1., -1., 1.]),
        v15: expand([1., -1., -1., 1.]),
    }
}

fn simpson_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// `∫∫_{[0,Λ]²} √(v10² + v15²) dp1 dp2` by composite Simpson on an
/// `grid × grid` lattice of intervals.
pub fn continuum_complexity(cutoff: f64, theta: f64, t: f64, grid: usize) -> Result<f64> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::InvalidParameter(format!("cutoff must be > 0, got {cutoff}")));
    }
    if grid < 64 {
        return Err(Error::InvalidParameter(format!("grid must be >= 64, got {grid}")));
    }
    let n = grid + grid % 2;
    let h = cutoff / n as f64;
    let unit: f64 = (0..=n)
        .into_par_iter()
        .map(|i| {
            let p1 = i as f64 * h;
            let wi = simpson_weight(i, n);
            (0..=n)
                .map(|j| {
                    let r = continuum_response(p1, j as f64 * h, theta, 1.0);
                    wi * simpson_weight(j, n) * r.v10.hypot(r.v15)
                })
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(t * unit * h * h / 9.0)
}

/// `(5/24) t Λ³ log Λ`.
pub fn asymptotic_scale(cutoff: f64, t: f64) -> f64 {
    5.0 / 24.0 * t * cutoff.powi(3) * cutoff.ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResponseRow {
    pub p1: f64,
    pub p2: f64,
    pub v10: f64,
    pub v15: f64,
}

/// Response on an `(n+1) × (n+1)` lattice over `[0, Λ]²`.
pub fn response_grid(cutoff: f64, theta: f64, t: f64, n: usize) -> Vec<ResponseRow> {
    let h = cutoff / n.max(1) as f64;
    (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i as f64 * h, j as f64 * h)))
        .map(|(p1, p2)| {
            let r = continuum_response(p1, p2, theta, t);
            ResponseRow {
                p1,
                p2,
                v10: r.v10,
                v15: r.v15,
            }
        })
        .collect()
}
