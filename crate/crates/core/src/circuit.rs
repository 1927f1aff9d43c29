//! Two-qubit gate synthesis with U3 and CNOT gates, and layered depth.
//!
//! Matrices use `kron(q0, q1)`: qubit 0 is the left tensor factor.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::Matrix4;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{c64, check_unitary, factor_kron, kron2, Mat2, Mat4, C64};
use crate::synthesis::{fix_phase, UnitarySequence};

/// `|tr(U† V)|/4` must reach `1 - FIDELITY_TOL`.
pub const FIDELITY_TOL: f64 = 1e-8;

const CLASS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GateOp {
    /// `U3(θ, φ, λ)` on one qubit.
    Single { qubits: [usize; 1], params: [f64; 3] },
    /// `qubits = [control, target]`.
    Cnot { qubits: [usize; 2] },
}

impl GateOp {
    pub fn single(qubit: usize, params: [f64; 3]) -> Self {
        GateOp::Single {
            qubits: [qubit],
            params,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp::Cnot {
            qubits: [control, target],
        }
    }

    pub fn qubits(&self) -> &[usize] {
        match self {
            GateOp::Single { qubits, .. } => qubits,
            GateOp::Cnot { qubits } => qubits,
        }
    }

    /// Full 4x4 matrix of the gate.
    pub fn matrix(&self) -> Mat4 {
        match self {
            GateOp::Single { qubits, params } => {
                let u = u3(params[0], params[1], params[2]);
                if qubits[0] == 0 {
                    kron2(&u, &Mat2::identity())
                } else {
                    kron2(&Mat2::identity(), &u)
                }
            }
            GateOp::Cnot { qubits } => cnot_matrix(qubits[0], qubits[1]),
        }
    }
}

/// `[[cos θ/2, -e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]`.
pub fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat2::new(
        c64(c, 0.),
        -C64::from_polar(s, lambda),
        C64::from_polar(s, phi),
        C64::from_polar(c, phi + lambda),
    )
}

/// U3 parameters of a 2x2 unitary, up to global phase.
pub fn u3_params(v: &Mat2) -> [f64; 3] {
    let w = v / v.determinant().sqrt();
    let (a, b) = (w[(0, 0)], w[(1, 0)]);
    let theta = 2.0 * b.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-12 { -2.0 * a.arg() } else { 0.0 };
    let diff = if b.norm() > 1e-12 { 2.0 * b.arg() } else { 0.0 };
    [theta, 0.5 * (sum + diff), 0.5 * (sum - diff)]
}

/// Control on `control`, target on `target`. `cnot_matrix(1, 0)` is
/// `[[1,0,0,0],[0,0,0,1],[0,0,1,0],[0,1,0,0]]`.
pub fn cnot_matrix(control: usize, target: usize) -> Mat4 {
    assert!(control < 2 && target < 2 && control != target);
    Mat4::from_fn(|r, c| {
        let bit = |idx: usize, q: usize| (idx >> (1 - q)) & 1;
        let mapped = if bit(c, control) == 1 { c ^ (1 << (1 - target)) } else { c };
        if r == mapped {
            c64(1., 0.)
        } else {
            c64(0., 0.)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircuitDecomposition {
    pub gates: Vec<GateOp>,
    pub depth: usize,
    pub cnot_count: usize,
}

impl CircuitDecomposition {
    pub fn from_gates(gates: Vec<GateOp>) -> Self {
        let gates = canonicalize(&gates);
        let cnot_count = gates.iter().filter(|g| matches!(g, GateOp::Cnot { .. })).count();
        let depth = depth(&gates);
        CircuitDecomposition {
            gates,
            depth,
            cnot_count,
        }
    }
}

/// Product of the gates in time order (first gate rightmost).
pub fn reconstruct(gates: &[GateOp]) -> Mat4 {
    gates.iter().fold(Mat4::identity(), |acc, g| g.matrix() * acc)
}

/// Greedy layering: each gate goes to the earliest layer after the last
/// layer used by any of its qubits.
pub fn depth(gates: &[GateOp]) -> usize {
    let mut free = [0usize; 2];
    for g in gates {
        let layer = g.qubits().iter().map(|&q| free[q]).max().unwrap_or(0);
        for &q in g.qubits() {
            free[q] = layer + 1;
        }
    }
    free[0].max(free[1])
}

fn is_identity_u3(params: &[f64; 3]) -> bool {
    let u = u3(params[0], params[1], params[2]);
    (u[(0, 0)] * u[(1, 1)].conj()).re > 0.0 && phase_fidelity2(&u, &Mat2::identity()) > 1.0 - 1e-12
}

fn phase_fidelity2(a: &Mat2, b: &Mat2) -> f64 {
    (a.adjoint() * b).trace().norm() / 2.0
}

/// Merge neighbouring single-qubit gates on the same wire and drop identities.
pub fn canonicalize(gates: &[GateOp]) -> Vec<GateOp> {
    let mut cur = gates.to_vec();
    loop {
        let next: Vec<GateOp> = merge_singles(&cur)
            .into_iter()
            .filter(|g| !matches!(g, GateOp::Single { params, .. } if is_identity_u3(params)))
            .collect();
        if next.len() == cur.len() {
            return next;
        }
        cur = next;
    }
}

fn merge_singles(gates: &[GateOp]) -> Vec<GateOp> {
    let mut out: Vec<GateOp> = Vec::with_capacity(gates.len());
    let mut last: [Option<usize>; 2] = [None, None];
    for g in gates {
        if let GateOp::Single { qubits, params } = g {
            let q = qubits[0];
            if let Some(i) = last[q] {
                if let GateOp::Single { params: prev, .. } = &out[i] {
                    let merged = u3(params[0], params[1], params[2]) * u3(prev[0], prev[1], prev[2]);
                    out[i] = GateOp::single(q, u3_params(&merged));
                    continue;
                }
            }
        }
        for &q in g.qubits() {
            last[q] = Some(out.len());
        }
        out.push(g.clone());
    }
    out
}

/// `|tr(A† B)| / 4`.
pub fn phase_fidelity(a: &Mat4, b: &Mat4) -> f64 {
    (a.adjoint() * b).trace().norm() / 4.0
}

fn magic_basis() -> Mat4 {
    let s = FRAC_1_SQRT_2;
    let (o, z, i) = (c64(s, 0.), c64(0., 0.), c64(0., s));
    Mat4::new(o, i, z, z, z, z, i, o, z, z, i, -o, o, -i, z, z)
}

const DXX: [f64; 4] = [1., -1., 1., -1.];
const DYY: [f64; 4] = [-1., 1., 1., -1.];
const DZZ: [f64; 4] = [1., 1., -1., -1.];

type Real4 = Matrix4<f64>;

fn to_complex(m: &Real4) -> Mat4 {
    m.map(|x| c64(x, 0.))
}

/// Magic-basis factorization `U_B = K1 · diag(e^{iθ}) · Pᵀ` of a special unitary.
struct MagicForm {
    k1: Real4,
    p: Real4,
    theta: [f64; 4],
    m2: Mat4,
}

fn magic_form(us: &Mat4) -> Result<MagicForm> {
    let b = magic_basis();
    let ub = b.adjoint() * us * b;
    let m2 = ub.transpose() * ub;
    let (re, im) = (m2.map(|z| z.re), m2.map(|z| z.im));
    for x in [0.618_033_988_749_895, 1.324_717_957_244_746, std::f64::consts::E, 0.271_828] {
        let eig = (re + im * x).symmetric_eigen();
        let mut p = eig.eigenvectors;
        if p.determinant() < 0.0 {
            p.set_column(0, &(-p.column(0)));
        }
        let d = to_complex(&p).transpose() * m2 * to_complex(&p);
        let off = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| d[(r, c)].norm())
            .fold(0.0, f64::max);
        if off > 1e-9 {
            continue;
        }
        let mut theta: [f64; 4] = std::array::from_fn(|j| d[(j, j)].arg() / 2.0);
        let total: f64 = theta.iter().sum();
        if ((total / PI).round() as i64).rem_euclid(2) == 1 {
            theta[0] -= PI;
        }
        let phases = Mat4::from_diagonal(&nalgebra::Vector4::from_fn(|j, _| {
            C64::from_polar(1.0, -theta[j])
        }));
        let k1c = ub * to_complex(&p) * phases;
        let imag = k1c.map(|z| z.im.abs()).max();
        if imag > 1e-8 {
            return Err(Error::Numerical(format!(
                "magic-basis factor is not real (imaginary part {imag:.2e})"
            )));
        }
        return Ok(MagicForm {
            k1: k1c.map(|z| z.re),
            p,
            theta,
            m2,
        });
    }
    Err(Error::Numerical("could not diagonalize the magic-basis square".into()))
}

/// `B O B† = a ⊗ b` for `O ∈ SO(4)`.
fn local_factors(o: &Real4) -> (Mat2, Mat2) {
    let b = magic_basis();
    factor_kron(&(b * to_complex(o) * b.adjoint()))
}

fn local_gates(o: &Real4) -> [GateOp; 2] {
    let (a, b) = local_factors(o);
    [GateOp::single(0, u3_params(&a)), GateOp::single(1, u3_params(&b))]
}

fn rz(t: f64) -> Mat2 {
    Mat2::new(
        C64::from_polar(1.0, -t / 2.0),
        c64(0., 0.),
        c64(0., 0.),
        C64::from_polar(1.0, t / 2.0),
    )
}

fn ry(t: f64) -> Mat2 {
    let (s, c) = (t / 2.0).sin_cos();
    Mat2::new(c64(c, 0.), c64(-s, 0.), c64(s, 0.), c64(c, 0.))
}

/// Interaction coefficients `(a, b, c)` of `exp(i(a XX + b YY + c ZZ))`.
pub fn interaction_coefficients(u: &Mat4) -> Result<[f64; 3]> {
    check_unitary(u, 1e-9)?;
    let (us, _) = fix_phase(u);
    let mf = magic_form(&us)?;
    let proj = |d: [f64; 4]| 0.25 * mf.theta.iter().zip(d).map(|(t, x)| t * x).sum::<f64>();
    Ok([proj(DXX), proj(DYY), proj(DZZ)])
}

fn is_scalar(m: &Mat4, tol: f64) -> bool {
    let s = m[(0, 0)];
    (0..4).all(|r| (0..4).all(|c| (m[(r, c)] - if r == c { s } else { c64(0., 0.) }).norm() < tol))
}

fn perms4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Local gates around a single CNOT for a unitary in the CNOT class.
fn synthesize_one_cnot(us: &Mat4, mf: &MagicForm) -> Result<Vec<GateOp>> {
    let (cs, _) = fix_phase(&cnot_matrix(1, 0));
    let mc = magic_form(&cs)?;
    let du: [C64; 4] = std::array::from_fn(|j| C64::from_polar(1.0, mf.theta[j]));
    let dc: [C64; 4] = std::array::from_fn(|j| C64::from_polar(1.0, mc.theta[j]));
    let mut best: Option<(usize, Vec<GateOp>)> = None;
    for perm in perms4() {
        for omega in [c64(1., 0.), c64(0., 1.), c64(-1., 0.), c64(0., -1.)] {
            // du[j] = ω dc[perm[j]] s_j with s_j = ±1.
            let signs: Option<Vec<f64>> = (0..4)
                .map(|j| {
                    let r = du[j] / (omega * dc[perm[j]]);
                    if (r - c64(1., 0.)).norm() < 1e-7 {
                        Some(1.0)
                    } else if (r + c64(1., 0.)).norm() < 1e-7 {
                        Some(-1.0)
                    } else {
                        None
                    }
                })
                .collect();
            let Some(signs) = signs else { continue };
            if signs.iter().product::<f64>() < 0.0 {
                continue;
            }
            let mut pi = Real4::from_fn(|r, c| if perm[r] == c { 1.0 } else { 0.0 });
            if pi.determinant() < 0.0 {
                pi.set_column(0, &(-pi.column(0)));
            }
            let s = Real4::from_diagonal(&nalgebra::Vector4::from_column_slice(&signs));
            let r1 = mf.k1 * pi * mc.k1.transpose();
            let r2 = mc.p * pi.transpose() * s * mf.p.transpose();
            let mut gates = local_gates(&r2).to_vec();
            gates.push(GateOp::cnot(1, 0));
            gates.extend(local_gates(&r1));
            let gates = canonicalize(&gates);
            if phase_fidelity(&reconstruct(&gates), us) < 1.0 - FIDELITY_TOL {
                continue;
            }
            if best.as_ref().is_none_or(|(n, _)| gates.len() < *n) {
                best = Some((gates.len(), gates));
            }
        }
    }
    best.map(|b| b.1)
        .ok_or_else(|| Error::Numerical("no single-CNOT matching found".into()))
}

/// Gate list for `exp(i(a XX + b YY + c ZZ))` up to global phase.
fn interaction_gates(a: f64, b: f64, c: f64) -> Vec<GateOp> {
    let s = |q: usize, m: Mat2| GateOp::single(q, u3_params(&m));
    vec![
        s(0, rz(FRAC_PI_2)),
        GateOp::cnot(1, 0),
        s(1, ry(2.0 * b - FRAC_PI_2)),
        GateOp::cnot(0, 1),
        s(0, rz(FRAC_PI_2 - 2.0 * c)),
        s(1, ry(FRAC_PI_2 - 2.0 * a)),
        GateOp::cnot(1, 0),
        s(1, rz(-FRAC_PI_2)),
    ]
}

pub fn kak_decompose(u: &Mat4) -> Result<CircuitDecomposition> {
    check_unitary(u, 1e-9)?;
    let (us, _) = fix_phase(u);
    let mf = magic_form(&us)?;
    let gates = if is_scalar(&mf.m2, CLASS_TOL) {
        local_gates(&(mf.k1 * mf.p.transpose())).to_vec()
    } else if mf.m2.trace().norm() < CLASS_TOL && is_scalar(&(mf.m2 * mf.m2), CLASS_TOL) {
        synthesize_one_cnot(&us, &mf)?
    } else {
        let proj = |d: [f64; 4]| 0.25 * mf.theta.iter().zip(d).map(|(t, x)| t * x).sum::<f64>();
        let mut gates = local_gates(&mf.p.transpose()).to_vec();
        gates.extend(interaction_gates(proj(DXX), proj(DYY), proj(DZZ)));
        gates.extend(local_gates(&mf.k1));
        gates
    };
    let circuit = CircuitDecomposition::from_gates(gates);
    let fid = phase_fidelity(&reconstruct(&circuit.gates), u);
    if fid < 1.0 - FIDELITY_TOL {
        return Err(Error::Numerical(format!(
            "circuit reconstruction fidelity {fid:.12} below tolerance"
        )));
    }
    Ok(circuit)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRow {
    pub t: usize,
    pub depth: usize,
    pub cumulative: usize,
    pub cnot_count: usize,
}

/// Per-step and running circuit depth of the stepwise factors.
pub fn depth_series(seq: &UnitarySequence) -> Result<Vec<DepthRow>> {
    let mut total = 0;
    seq.factors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let c = kak_decompose(f)?;
            total += c.depth;
            Ok(DepthRow {
                t: i + 1,
                depth: c.depth,
                cumulative: total,
                cnot_count: c.cnot_count,
            })
        })
        .collect()
}
