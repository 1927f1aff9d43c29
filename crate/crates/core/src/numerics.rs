//! Small dense complex linear algebra used throughout the crate.
//!
//! Everything here works on fixed 2x2 and 4x4 complex matrices. Heavier
//! decompositions (Schur, Hermitian eigen, Padé exponential) come from
//! `nalgebra`; the 2x2 Hermitian eigensolver is closed form so that its
//! phase convention is fully under our control.

use nalgebra::{Complex, Matrix2, Matrix4, SMatrix, Vector2, Vector4};

use crate::algebra::GeneratorBasis;
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;
pub type Vec2 = Vector2<C64>;
pub type Vec4 = Vector4<C64>;

/// Unitarity tolerance accepted on input by the log and decomposition routines.
pub const UNITARY_TOL: f64 = 1e-9;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

pub fn kron_vec2(a: &Vec2, b: &Vec2) -> Vec4 {
    Vec4::from_fn(|r, _| a[r / 2] * b[r % 2])
}

pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &SMatrix<C64, R, C>,
    b: &SMatrix<C64, R, C>,
) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |U U† - I|` entrywise.
pub fn unitarity_residual<const N: usize>(u: &SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(&(u * u.adjoint()), &SMatrix::<C64, N, N>::identity())
}

pub fn hermiticity_residual<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn check_finite<const R: usize, const C: usize>(m: &SMatrix<C64, R, C>) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn check_unitary<const N: usize>(u: &SMatrix<C64, N, N>, tol: f64) -> Result<()> {
    check_finite(u)?;
    let r = unitarity_residual(u);
    if r > tol {
        return Err(Error::NotUnitary(r));
    }
    Ok(())
}

/// Rotate `v` so that its first non-negligible component is real and positive.
pub fn fix_vector_phase<const N: usize>(v: &mut SMatrix<C64, N, 1>) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > 1e-12 * scale.max(1e-300)) {
        let phase = lead.conj() / lead.norm();
        *v *= phase;
    }
}

/// Eigen-decomposition of a 2x2 Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum2 {
    /// Sorted descending.
    pub eigenvalues: [f64; 2],
    /// Columns are the eigenvectors, each phase-fixed.
    pub eigenvectors: Mat2,
}

impl Spectrum2 {
    pub fn vector(&self, i: usize) -> Vec2 {
        self.eigenvectors.column(i).into_owned()
    }
}

pub fn hermitian_eigen_2x2(rho: &Mat2) -> Result<Spectrum2> {
    check_finite(rho)?;
    let herm = hermiticity_residual(rho);
    if herm > 1e-10 {
        return Err(Error::NotHermitian(herm));
    }
    let a = rho[(0, 0)].re;
    let d = rho[(1, 1)].re;
    let b = rho[(0, 1)];
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let radius = (half * half + b.norm_sqr()).sqrt();
    let (hi, lo) = (mean + radius, mean - radius);

    let mut top = if radius <= 1e-15 * (1.0 + mean.abs()) {
        Vec2::new(c64(1.0, 0.0), c64(0.0, 0.0))
    } else {
        // Two algebraically equivalent null vectors of (rho - hi); keep the better conditioned.
        let u = Vec2::new(b, c64(hi - a, 0.0));
        let w = Vec2::new(c64(hi - d, 0.0), b.conj());
        if u.norm() >= w.norm() {
            u
        } else {
            w
        }
    };
    top /= c64(top.norm(), 0.0);
    fix_vector_phase(&mut top);
    let mut bottom = Vec2::new(-top[1].conj(), top[0].conj());
    fix_vector_phase(&mut bottom);

    Ok(Spectrum2 {
        eigenvalues: [hi, lo],
        eigenvectors: Mat2::from_columns(&[top, bottom]),
    })
}

/// Principal logarithm of a unitary, returned as the Hermitian `H` with `U = exp(-iH)`.
#[derive(Clone, Debug)]
pub struct UnitaryLog {
    pub hermitian: Mat4,
    /// Some eigenphase sits on the branch cut (within 1e-12 of ±π), so the
    /// principal choice is numerically arbitrary there.
    pub branch_ambiguous: bool,
}

pub fn principal_log_unitary(u: &Mat4) -> Result<UnitaryLog> {
    check_unitary(u, UNITARY_TOL)?;
    let schur = nalgebra::linalg::Schur::try_new(*u, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let mut branch_ambiguous = false;
    let mut diag = Mat4::zeros();
    for j in 0..4 {
        // arg lies in (-π, π]; U = exp(-iH) puts -arg on H's diagonal.
        let phase = t[(j, j)].arg();
        if std::f64::consts::PI - phase.abs() < 1e-12 {
            branch_ambiguous = true;
        }
        diag[(j, j)] = c64(-phase, 0.0);
    }
    let h = q * diag * q.adjoint();
    let hermitian = (h + h.adjoint()) * c64(0.5, 0.0);
    Ok(UnitaryLog {
        hermitian,
        branch_ambiguous,
    })
}

/// Matrix exponential by scaling and squaring with Padé approximants.
pub fn matrix_exp<M: MatrixExp>(a: &M) -> Result<M> {
    a.checked_exp()
}

/// Square complex matrices with a Padé exponential.
pub trait MatrixExp: Sized {
    fn checked_exp(&self) -> Result<Self>;
}

impl MatrixExp for Mat2 {
    fn checked_exp(&self) -> Result<Self> {
        check_finite(self)?;
        Ok(self.exp())
    }
}

impl MatrixExp for Mat4 {
    fn checked_exp(&self) -> Result<Self> {
        check_finite(self)?;
        Ok(self.exp())
    }
}

/// Real matrix exponential for dynamically sized generators.
pub fn real_matrix_exp(a: &nalgebra::DMatrix<f64>) -> Result<nalgebra::DMatrix<f64>> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(a.clone().exp())
}

/// `exp(-i t H)` for Hermitian `H`, through its spectral decomposition.
pub fn exp_i_hermitian(h: &Mat4, t: f64) -> Mat4 {
    let eig = h.symmetric_eigen();
    let phases = Mat4::from_diagonal(&Vec4::from_fn(|j, _| {
        C64::from_polar(1.0, -t * eig.eigenvalues[j])
    }));
    eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Complete a unit vector into a unitary by sequential Gram-Schmidt on three seeds.
///
/// Column 0 is `first`, bit for bit. Each seed is orthogonalized twice against
/// the columns built so far.
pub fn gram_schmidt_complete(first: &Vec4, seeds: &[Vec4; 3]) -> Result<Mat4> {
    check_finite(first)?;
    let n = first.norm();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "first column must be unit norm, got {n}"
        )));
    }
    let mut cols: Vec<Vec4> = Vec::with_capacity(4);
    cols.push(*first);
    for seed in seeds {
        check_finite(seed)?;
        let mut u = *seed;
        for _ in 0..2 {
            for c in &cols {
                let overlap = c.dotc(&u);
                u -= c * overlap;
            }
        }
        let residual = u.norm();
        if residual < 1e-10 {
            return Err(Error::DegenerateSeed(residual));
        }
        cols.push(u / c64(residual, 0.0));
    }
    Ok(Mat4::from_columns(&cols))
}

/// Midpoint-rule path-ordered exponential `P exp(-i ∫_0^1 V(s)·T ds)`.
///
/// Later slices multiply from the left.
pub fn path_ordered_product<F>(response: F, basis: &GeneratorBasis, n_slices: usize) -> Mat4
where
    F: Fn(f64) -> [f64; 15],
{
    let n = n_slices.max(1);
    let ds = 1.0 / n as f64;
    (0..n).fold(Mat4::identity(), |acc, m| {
        let s = (m as f64 + 0.5) * ds;
        let h = basis.combine(&response(s));
        exp_i_hermitian(&h, ds) * acc
    })
}

/// Factor a 4x4 matrix known to be `a ⊗ b` with `a, b` unitary.
///
/// Returns `(a, b)` with `b ∈ SU(2)`; any global phase ends up in `a`.
pub fn factor_kron(m: &Mat4) -> (Mat2, Mat2) {
    let block = |i: usize, j: usize| -> Mat2 { Mat2::from_fn(|r, c| m[(2 * i + r, 2 * j + c)]) };
    let mut best = (0, 0);
    let mut best_norm = -1.0;
    for i in 0..2 {
        for j in 0..2 {
            let nrm = block(i, j).norm();
            if nrm > best_norm {
                best_norm = nrm;
                best = (i, j);
            }
        }
    }
    let blk = block(best.0, best.1);
    let b = blk / blk.determinant().sqrt();
    let a = Mat2::from_fn(|i, j| (b.adjoint() * block(i, j)).trace() * 0.5);
    (a, b)
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.))
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.))
}
