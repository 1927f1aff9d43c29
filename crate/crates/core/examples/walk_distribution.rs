//! Position distribution of the Hadamard-like walk after 30 steps.

use std::f64::consts::FRAC_PI_4;

use qwc::walk::{evolve, probability_distribution};

fn main() {
    let states = evolve(FRAC_PI_4, 30);
    let d = probability_distribution(states.last().unwrap());
    for (x, p) in d.iter().filter(|(_, p)| *p > 0.0) {
        println!("{x:>4} {p:.6} {}", "#".repeat((p * 400.0) as usize));
    }
    println!("total {:.15}", d.total());
}
