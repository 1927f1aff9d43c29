//! The su(4) generators built from four Majorana operators.

use qwc::algebra::{Algebra, DIM};

fn main() {
    let alg = Algebra::shared();
    for i in 0..DIM {
        println!("T{:<2} bits {:04b} weight {}", i + 1, alg.basis.bits[i], alg.basis.weight[i]);
    }
    let nonzero = (0..DIM)
        .flat_map(|i| (0..DIM).flat_map(move |j| (0..DIM).map(move |k| (i, j, k))))
        .filter(|&(i, j, k)| alg.f.get(i, j, k) != 0.0)
        .count();
    println!("nonzero f_ijk: {nonzero}");
    println!("f_1,2,5 = {}", alg.f.get(0, 1, 4));
    println!("jacobi residual {:.1e}", alg.f.jacobi_residual());
    println!("max |K - I| {:.1e}", (alg.killing - qwc::algebra::RealMatrix15::identity()).amax());
}
