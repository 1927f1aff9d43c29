//! CNOT decompositions of the stepwise unitaries and their depth.

use std::f64::consts::FRAC_PI_4;

use qwc::algebra::penalty_metric;
use qwc::circuit::{depth_series, kak_decompose, phase_fidelity, reconstruct, GateOp};
use qwc::complexity::{stepwise_run, SelectRule};

fn main() -> qwc::Result<()> {
    let p = penalty_metric(2, 100.0)?;
    let (_, seq) = stepwise_run(FRAC_PI_4, 10, &p, 100, 7, SelectRule::Increment)?;
    let first = kak_decompose(&seq.factors[0])?;
    for g in &first.gates {
        match g {
            GateOp::Single { qubits, params } => println!(
                "  u3({:+.4}, {:+.4}, {:+.4}) q{}",
                params[0], params[1], params[2], qubits[0]
            ),
            GateOp::Cnot { qubits } => println!("  cx q{} -> q{}", qubits[0], qubits[1]),
        }
    }
    println!("fidelity {:.15}", phase_fidelity(&reconstruct(&first.gates), &seq.factors[0]));
    for row in depth_series(&seq)? {
        println!("t={:>2} depth {} cnots {} cumulative {}", row.t, row.depth, row.cnot_count, row.cumulative);
    }
    Ok(())
}
