//! The su(4) algebra built from four Majorana operators.
//!
//! Generators are indexed 0..15 in code. `T[0]..T[3]` are the single
//! Majoranas, `T[4]..T[9]` the bilinears, `T[10]..T[13]` the trilinears and
//! `T[14]` the product of all four.

use std::sync::OnceLock;

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::numerics::{c64, kron2, pauli_x, pauli_y, pauli_z, Mat2, Mat4, C64};

pub const DIM: usize = 15;

/// Normalization constant in the Killing form `K_ij = -(1/h) f_il^m f_jm^l`.
pub const KILLING_NORMALIZATION: f64 = 32.0;

/// γ-content of each generator: bit `a` set means `γ_{a+1}` is a factor.
pub const GENERATOR_BITS: [u8; DIM] = [
    0b0001, 0b0010, 0b0100, 0b1000, // γ1 γ2 γ3 γ4
    0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100, // γ1γ2 γ1γ3 γ1γ4 γ2γ3 γ2γ4 γ3γ4
    0b0111, 0b1011, 0b1101, 0b1110, // γ1γ2γ3 γ1γ2γ4 γ1γ3γ4 γ2γ3γ4
    0b1111,
];

pub type RealMatrix15 = SMatrix<f64, DIM, DIM>;

#[derive(Clone, Debug)]
pub struct MajoranaSet {
    pub gamma: [Mat4; 4],
}

pub fn build_majoranas() -> MajoranaSet {
    let id = Mat2::identity();
    MajoranaSet {
        gamma: [
            kron2(&pauli_x(), &id),
            kron2(&pauli_y(), &id),
            kron2(&pauli_z(), &pauli_x()),
            kron2(&pauli_z(), &pauli_y()),
        ],
    }
}

/// Phase in front of each product: 1, i, -i, -1 for one to four factors.
pub fn prefactor(weight: u32) -> C64 {
    match weight {
        1 => c64(1., 0.),
        2 => c64(0., 1.),
        3 => c64(0., -1.),
        4 => c64(-1., 0.),
        _ => unreachable!("generator weight is 1..=4"),
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    pub t: [Mat4; DIM],
    pub bits: [u8; DIM],
    /// Number of Majorana factors in each generator.
    pub weight: [u32; DIM],
}

pub fn build_generators(m: &MajoranaSet) -> GeneratorBasis {
    let t = std::array::from_fn(|i| {
        let bits = GENERATOR_BITS[i];
        let product = (0..4)
            .filter(|a| bits & (1 << a) != 0)
            .fold(Mat4::identity(), |acc, a| acc * m.gamma[a]);
        product * prefactor(bits.count_ones())
    });
    GeneratorBasis {
        t,
        bits: GENERATOR_BITS,
        weight: GENERATOR_BITS.map(|b| b.count_ones()),
    }
}

impl GeneratorBasis {
    /// `Σ_i v_i T_i`.
    pub fn combine(&self, v: &[f64; DIM]) -> Mat4 {
        self.t
            .iter()
            .zip(v)
            .fold(Mat4::zeros(), |acc, (t, &x)| acc + t * c64(x, 0.0))
    }

    /// Coefficients `(1/4) tr(T_i X)` of the traceless part of `X`.
    ///
    /// Also returns the largest imaginary residue, which vanishes for Hermitian `X`.
    pub fn project(&self, x: &Mat4) -> ([f64; DIM], f64) {
        let mut worst: f64 = 0.0;
        let v = std::array::from_fn(|i| {
            let z = (self.t[i] * x).trace() * 0.25;
            worst = worst.max(z.im.abs());
            z.re
        });
        (v, worst)
    }

    pub fn indices_with_weight(&self, w: u32) -> Vec<usize> {
        (0..DIM).filter(|&i| self.weight[i] == w).collect()
    }
}

/// Dense `f_ij^k`, stored `[i][j][k]`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    f: Vec<f64>,
}

impl StructureConstants {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.f[(i * DIM + j) * DIM + k]
    }

    /// Largest Jacobi-identity residual over all index combinations.
    pub fn jacobi_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        let s: f64 = (0..DIM)
                            .map(|m| {
                                self.get(i, j, m) * self.get(m, k, l)
                                    + self.get(j, k, m) * self.get(m, i, l)
                                    + self.get(k, i, m) * self.get(m, j, l)
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// `f_ij^k = -(i/4) tr(T_k [T_i, T_j])`.
pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants> {
    let mut f = vec![0.0; DIM * DIM * DIM];
    for i in 0..DIM {
        for j in 0..i {
            let comm = basis.t[i] * basis.t[j] - basis.t[j] * basis.t[i];
            for k in 0..DIM {
                let z = (basis.t[k] * comm).trace() * c64(0.0, -0.25);
                if z.im.abs() > 1e-9 {
                    return Err(Error::Numerical(format!(
                        "structure constant f[{i}][{j}][{k}] has imaginary part {:.3e}",
                        z.im
                    )));
                }
                f[(i * DIM + j) * DIM + k] = z.re;
                f[(j * DIM + i) * DIM + k] = -z.re;
            }
        }
    }
    Ok(StructureConstants { f })
}

/// `K_ij = -(1/h) f_il^m f_jm^l`, checked against the identity.
pub fn killing_form(f: &StructureConstants) -> Result<RealMatrix15> {
    let k = RealMatrix15::from_fn(|i, j| {
        let mut s = 0.0;
        for l in 0..DIM {
            for m in 0..DIM {
                s += f.get(i, l, m) * f.get(j, m, l);
            }
        }
        -s / KILLING_NORMALIZATION
    });
    let dev = (k - RealMatrix15::identity()).amax();
    if dev > 1e-10 {
        return Err(Error::Numerical(format!(
            "Killing form deviates from identity by {dev:.3e}"
        )));
    }
    Ok(k)
}

pub const DEFAULT_MU: f64 = 100.0;

/// Diagonal k-local penalty metric `G_ij = c_i δ_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct PenaltyMetric {
    pub k: u32,
    pub mu: f64,
    pub costs: [f64; DIM],
}

pub fn penalty_metric(k: u32, mu: f64) -> Result<PenaltyMetric> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidLocality(k));
    }
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "penalty mu must be finite and >= 0, got {mu}"
        )));
    }
    let costs = GENERATOR_BITS.map(|b| if b.count_ones() <= k { 1.0 } else { 1.0 + mu });
    Ok(PenaltyMetric { k, mu, costs })
}

impl PenaltyMetric {
    pub fn metric(&self) -> RealMatrix15 {
        RealMatrix15::from_diagonal(&self.costs.into())
    }

    pub fn is_hard(&self, i: usize) -> bool {
        GENERATOR_BITS[i].count_ones() > self.k
    }
}

/// Generators, structure constants and Killing form, built once.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub majoranas: MajoranaSet,
    pub basis: GeneratorBasis,
    pub f: StructureConstants,
    pub killing: RealMatrix15,
}

impl Algebra {
    pub fn new() -> Result<Self> {
        let majoranas = build_majoranas();
        let basis = build_generators(&majoranas);
        let f = structure_constants(&basis)?;
        let killing = killing_form(&f)?;
        Ok(Algebra {
            majoranas,
            basis,
            f,
            killing,
        })
    }

    /// Process-wide instance; construction cannot fail for the fixed matrices.
    pub fn shared() -> &'static Algebra {
        static CELL: OnceLock<Algebra> = OnceLock::new();
        CELL.get_or_init(|| Algebra::new().expect("su(4) algebra self-check"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hermiticity_residual, max_abs_diff, unitarity_residual};

    #[test]
    fn gamma_one_matches_printed_matrix() {
        let g = build_majoranas();
        let one = c64(1., 0.);
        let zero = c64(0., 0.);
        let expect = Mat4::new(
            zero, zero, one, zero, zero, zero, zero, one, one, zero, zero, zero, zero, one, zero,
            zero,
        );
        assert_eq!(g.gamma[0], expect);
    }

    #[test]
    fn majoranas_anticommute() {
        let g = build_majoranas();
        for a in 0..4 {
            assert!(hermiticity_residual(&g.gamma[a]) < 1e-15);
            assert!(unitarity_residual(&g.gamma[a]) < 1e-15);
            for b in 0..4 {
                let ac = g.gamma[a] * g.gamma[b] + g.gamma[b] * g.gamma[a];
                let expect = if a == b { Mat4::identity() * c64(2., 0.) } else { Mat4::zeros() };
                assert!(max_abs_diff(&ac, &expect) < 1e-12);
            }
        }
    }

    #[test]
    fn prefactors_follow_binomial_rule() {
        for q in 1..=4u32 {
            let power = q * (q - 1) / 2;
            let expect = (0..power).fold(c64(1., 0.), |acc, _| acc * c64(0., 1.));
            assert_eq!(prefactor(q), expect);
        }
    }

    #[test]
    fn t5_is_minus_sigma3_kron_identity() {
        let b = build_generators(&build_majoranas());
        let expect = kron2(&(-pauli_z()), &Mat2::identity());
        assert!(max_abs_diff(&b.t[4], &expect) < 1e-15);
        assert_eq!(b.weight[14], 4);
    }

    #[test]
    fn weights_partition() {
        let b = build_generators(&build_majoranas());
        let counts: Vec<usize> = (1..=4).map(|w| b.indices_with_weight(w).len()).collect();
        assert_eq!(counts, vec![4, 6, 4, 1]);
    }

    #[test]
    fn selected_structure_constants() {
        let alg = Algebra::new().unwrap();
        assert!((alg.f.get(0, 1, 4) + 2.0).abs() < 1e-14);
        assert!((alg.f.get(1, 0, 4) - 2.0).abs() < 1e-14);
        assert_eq!(alg.f.get(0, 0, 4), 0.0);
    }

    #[test]
    fn killing_entries() {
        let alg = Algebra::new().unwrap();
        assert!((alg.killing[(0, 0)] - 1.0).abs() < 1e-12);
        assert!(alg.killing[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn penalty_costs() {
        let p = penalty_metric(2, 10.0).unwrap();
        assert_eq!(p.costs[4], 1.0);
        assert_eq!(p.costs[10], 11.0);
        let p4 = penalty_metric(4, 1e6).unwrap();
        assert!(p4.costs.iter().all(|&c| c == 1.0));
        assert!(matches!(penalty_metric(0, 1.0), Err(Error::InvalidLocality(0))));
        assert!(matches!(penalty_metric(5, 1.0), Err(Error::InvalidLocality(5))));
        assert!(penalty_metric(2, -1.0).is_err());
        let g = p.metric();
        assert_eq!(g[(10, 10)], 11.0);
        assert_eq!(g[(10, 11)], 0.0);
    }
}
