//! Closed-form Euler–Arnold geodesics for the k-local penalty metrics.
//!
//! Along a geodesic some generator coefficients stay constant and the rest
//! rotate under a real antisymmetric generator built from the structure
//! constants and the constants of motion:
//!
//! `dA/ds = L A`,  `L_ip = (1/c_i) Σ_{k ∉ R} f_ikp (c_p - c_k) V_k`,
//!
//! so `A(s) = exp(L (s - 1)) A(1)` whenever the drivers `V_k` are constant.
//! For k = 1 the hard sector is driven by the rotating single-Majorana sector
//! and is integrated with a fourth-order Magnus scheme instead.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{PenaltyMetric, StructureConstants, DIM, GENERATOR_BITS};
use crate::error::{Error, Result};
use crate::numerics::real_matrix_exp;

use super::ResponseVector;

/// Minimum Magnus steps per unit of affine parameter for the driven sector.
const MAGNUS_STEPS_PER_UNIT: f64 = 256.0;
/// Largest `h ‖L‖` allowed in one Magnus step.
const MAGNUS_MAX_PHASE: f64 = 0.02;

fn weight(i: usize) -> u32 {
    GENERATOR_BITS[i].count_ones()
}

fn indices_with_weights(ws: &[u32]) -> Vec<usize> {
    (0..DIM).filter(|&i| ws.contains(&weight(i))).collect()
}

/// A rotating block: the indices it moves and the indices that drive it.
#[derive(Clone, Debug)]
struct Sector {
    rotating: Vec<usize>,
    drivers: Vec<usize>,
}

#[derive(Clone, Debug)]
enum Dynamics {
    Constant,
    /// One block with constant drivers.
    Single { sector: Sector, gen: DMatrix<f64> },
    /// k = 1: a constant block, and a second block driven by the first.
    Cascade {
        first: Sector,
        first_gen: DMatrix<f64>,
        second: Sector,
    },
}

#[derive(Clone, Debug)]
pub struct GeodesicPath {
    pub penalty: PenaltyMetric,
    pub endpoint: ResponseVector,
    f: StructureConstants,
    dynamics: Dynamics,
    /// Multiplies every generator; -1 gives the sign-flipped control path.
    sign: f64,
}

/// `L_ip` over `sector.rotating`, with drivers taken from `v`.
fn sector_generator(
    sector: &Sector,
    v: &[f64; DIM],
    costs: &[f64; DIM],
    f: &StructureConstants,
) -> DMatrix<f64> {
    let n = sector.rotating.len();
    DMatrix::from_fn(n, n, |a, b| {
        let i = sector.rotating[a];
        let p = sector.rotating[b];
        sector
            .drivers
            .iter()
            .map(|&k| f.get(i, k, p) * (costs[p] - costs[k]) * v[k])
            .sum::<f64>()
            / costs[i]
    })
}

pub fn geodesic_path(
    v1: &ResponseVector,
    p: &PenaltyMetric,
    f: &StructureConstants,
) -> Result<GeodesicPath> {
    let sector = |rot: &[u32], drv: &[u32]| Sector {
        rotating: indices_with_weights(rot),
        drivers: indices_with_weights(drv),
    };
    let dynamics = match p.k {
        4 => Dynamics::Constant,
        3 => {
            let s = sector(&[1, 3], &[2, 4]);
            let gen = sector_generator(&s, &v1.v, &p.costs, f);
            Dynamics::Single { sector: s, gen }
        }
        2 => {
            let s = sector(&[3, 4], &[1, 2]);
            let gen = sector_generator(&s, &v1.v, &p.costs, f);
            Dynamics::Single { sector: s, gen }
        }
        1 => {
            let first = sector(&[1], &[2, 3, 4]);
            let first_gen = sector_generator(&first, &v1.v, &p.costs, f);
            Dynamics::Cascade {
                first,
                first_gen,
                second: sector(&[3, 4], &[1, 2]),
            }
        }
        k => return Err(Error::InvalidLocality(k)),
    };
    Ok(GeodesicPath {
        penalty: p.clone(),
        endpoint: v1.clone(),
        f: f.clone(),
        dynamics,
        sign: 1.0,
    })
}

fn gather(v: &[f64; DIM], idx: &[usize]) -> DVector<f64> {
    DVector::from_iterator(idx.len(), idx.iter().map(|&i| v[i]))
}

fn scatter(out: &mut [f64; DIM], idx: &[usize], x: &DVector<f64>) {
    for (a, &i) in idx.iter().enumerate() {
        out[i] = x[a];
    }
}

fn exp_or_panic(m: &DMatrix<f64>) -> DMatrix<f64> {
    real_matrix_exp(m).expect("finite geodesic generator")
}

impl GeodesicPath {
    /// Same endpoint data with every generator negated. Not a geodesic; used
    /// as a negative control for the residual check.
    pub fn sign_flipped(&self) -> GeodesicPath {
        GeodesicPath {
            sign: -self.sign,
            ..self.clone()
        }
    }

    /// Index sets whose Euclidean norms are conserved along the path.
    pub fn sectors(&self) -> Vec<Vec<usize>> {
        match &self.dynamics {
            Dynamics::Constant => vec![(0..DIM).collect()],
            Dynamics::Single { sector, .. } => {
                let rest = (0..DIM).filter(|i| !sector.rotating.contains(i)).collect();
                vec![sector.rotating.clone(), rest]
            }
            Dynamics::Cascade { first, second, .. } => {
                let rest = (0..DIM)
                    .filter(|i| !first.rotating.contains(i) && !second.rotating.contains(i))
                    .collect();
                vec![first.rotating.clone(), second.rotating.clone(), rest]
            }
        }
    }

    /// Generator matrix of the constant-driver block (k = 2, 3, and the
    /// first k = 1 block), in the order of the rotating indices.
    pub fn generator(&self) -> Option<(Vec<usize>, DMatrix<f64>)> {
        match &self.dynamics {
            Dynamics::Constant => None,
            Dynamics::Single { sector, gen } => Some((sector.rotating.clone(), gen * self.sign)),
            Dynamics::Cascade {
                first, first_gen, ..
            } => Some((first.rotating.clone(), first_gen * self.sign)),
        }
    }

    /// Generator of the driven k = 1 block at a given first-block state.
    pub fn driven_generator(&self, v: &[f64; DIM]) -> Option<(Vec<usize>, DMatrix<f64>)> {
        match &self.dynamics {
            Dynamics::Cascade { second, .. } => Some((
                second.rotating.clone(),
                sector_generator(second, v, &self.penalty.costs, &self.f) * self.sign,
            )),
            _ => None,
        }
    }

    /// `V(s)` for `s ∈ [0, 1]`.
    pub fn at(&self, s: f64) -> [f64; DIM] {
        let v1 = &self.endpoint.v;
        let mut out = *v1;
        match &self.dynamics {
            Dynamics::Constant => {}
            Dynamics::Single { sector, gen } => {
                let a = exp_or_panic(&(gen * (self.sign * (s - 1.0)))) * gather(v1, &sector.rotating);
                scatter(&mut out, &sector.rotating, &a);
            }
            Dynamics::Cascade {
                first,
                first_gen,
                second,
            } => {
                let first_at = |sp: f64| -> [f64; DIM] {
                    let mut w = *v1;
                    let a = exp_or_panic(&(first_gen * (self.sign * (sp - 1.0))))
                        * gather(v1, &first.rotating);
                    scatter(&mut w, &first.rotating, &a);
                    w
                };
                let gen_at = |sp: f64| {
                    sector_generator(second, &first_at(sp), &self.penalty.costs, &self.f)
                        * self.sign
                };
                out = first_at(s);
                let rate = first_gen.norm() + gen_at(1.0).norm();
                let a2 = magnus4(gen_at, gather(v1, &second.rotating), 1.0, s, rate);
                scatter(&mut out, &second.rotating, &a2);
            }
        }
        out
    }

    /// `Σ_i c_i V_i(s)²`, constant along a true geodesic.
    pub fn speed_sqr(&self, s: f64) -> f64 {
        let v = self.at(s);
        (0..DIM).map(|i| self.penalty.costs[i] * v[i] * v[i]).sum()
    }
}

/// Fourth-order Magnus integration of `dx/ds = L(s) x` from `s0` to `s1`.
fn magnus4<F>(gen: F, x0: DVector<f64>, s0: f64, s1: f64, rate: f64) -> DVector<f64>
where
    F: Fn(f64) -> DMatrix<f64>,
{
    let span = s1 - s0;
    if span == 0.0 {
        return x0;
    }
    let per_unit = MAGNUS_STEPS_PER_UNIT.max(rate / MAGNUS_MAX_PHASE);
    let n = ((span.abs() * per_unit).ceil() as usize).max(4);
    let h = span / n as f64;
    let c = 3f64.sqrt() / 6.0;
    let mut x = x0;
    for m in 0..n {
        let s = s0 + m as f64 * h;
        let a1 = gen(s + (0.5 - c) * h);
        let a2 = gen(s + (0.5 + c) * h);
        let comm = &a2 * &a1 - &a1 * &a2;
        let omega = (&a1 + &a2) * (0.5 * h) + comm * (3f64.sqrt() / 12.0 * h * h);
        x = exp_or_panic(&omega) * x;
    }
    x
}

/// Max over `s_grid` of `|c_i dV_i/ds - Σ_kp f_ikp c_p V_k V_p|`, with a
/// five-point central difference of step `h`. Paths are evaluated past the
/// ends of `[0, 1]` where the stencil needs it.
pub fn euler_arnold_residual(path: &GeodesicPath, f: &StructureConstants, s_grid: &[f64], h: f64) -> f64 {
    let c = &path.penalty.costs;
    let mut worst: f64 = 0.0;
    for &s in s_grid {
        let (m2, m1, v, p1, p2) = (
            path.at(s - 2.0 * h),
            path.at(s - h),
            path.at(s),
            path.at(s + h),
            path.at(s + 2.0 * h),
        );
        for i in 0..DIM {
            let lhs = c[i] * (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
            let mut rhs = 0.0;
            for k in 0..DIM {
                if v[k] == 0.0 {
                    continue;
                }
                for p in 0..DIM {
                    rhs += f.get(i, k, p) * c[p] * v[k] * v[p];
                }
            }
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}
