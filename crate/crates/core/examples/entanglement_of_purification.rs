//! EoP of the coin state for a few coin angles.

use std::f64::consts::PI;

use qwc::purification::{eop, purify, reduce, LogBase};
use qwc::walk::evolve;

fn main() {
    let thetas = [("0", 0.0), ("pi/8", PI / 8.0), ("pi/4", PI / 4.0), ("2pi/3", 2.0 * PI / 3.0)];
    print!("{:>4}", "t");
    for (name, _) in thetas {
        print!("{name:>10}");
    }
    println!();
    let series: Vec<Vec<f64>> = thetas
        .iter()
        .map(|&(_, th)| {
            evolve(th, 20)
                .iter()
                .map(|s| eop(&purify(&reduce(s)), LogBase::Natural))
                .collect()
        })
        .collect();
    for t in 0..=20 {
        print!("{t:>4}");
        for s in &series {
            print!("{:>10.5}", s[t]);
        }
        println!();
    }
}
