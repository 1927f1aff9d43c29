//! One-dimensional discrete-time quantum walk with a real rotation coin.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use serde::Serialize;

use crate::numerics::{c64, C64};

/// Coin `C(θ) = [[cos θ, sin θ], [-sin θ, cos θ]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinParams {
    theta: f64,
}

impl CoinParams {
    /// The angle is reduced to `[0, 2π)`.
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        CoinParams { theta: t }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn cos_sin(&self) -> (f64, f64) {
        (self.theta.cos(), self.theta.sin())
    }
}

/// Amplitudes `A_x(t)` (coin up) and `B_x(t)` (coin down) for `x ∈ [-t, t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    coin: CoinParams,
    t: usize,
    a: Vec<C64>,
    b: Vec<C64>,
}

impl WalkState {
    pub fn theta(&self) -> f64 {
        self.coin.theta()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let t = self.t as i64;
        -t..=t
    }

    fn slot(&self, x: i64) -> Option<usize> {
        let i = x + self.t as i64;
        (0..self.a.len() as i64).contains(&i).then_some(i as usize)
    }

    pub fn up(&self, x: i64) -> C64 {
        self.slot(x).map_or(c64(0., 0.), |i| self.a[i])
    }

    pub fn down(&self, x: i64) -> C64 {
        self.slot(x).map_or(c64(0., 0.), |i| self.b[i])
    }

    /// Up amplitudes indexed by `x + t`.
    pub fn up_amplitudes(&self) -> &[C64] {
        &self.a
    }

    pub fn down_amplitudes(&self) -> &[C64] {
        &self.b
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.iter().chain(&self.b).map(|z| z.norm_sqr()).sum()
    }
}

/// `(|↑⟩ + i|↓⟩)/√2 ⊗ |0⟩`.
pub fn initial_state(theta: f64) -> WalkState {
    WalkState {
        coin: CoinParams::new(theta),
        t: 0,
        a: vec![c64(FRAC_1_SQRT_2, 0.)],
        b: vec![c64(0., FRAC_1_SQRT_2)],
    }
}

/// One coin toss followed by the conditional shift.
pub fn step(s: &WalkState) -> WalkState {
    let (c, sn) = s.coin.cos_sin();
    let len = s.a.len() + 2;
    let mut a = vec![c64(0., 0.); len];
    let mut b = vec![c64(0., 0.); len];
    // Old slot i (position i - t) feeds new slot i + 2 for A (x + 1) and slot i for B (x - 1).
    for i in 0..s.a.len() {
        let (up, down) = (s.a[i], s.b[i]);
        a[i + 2] += up * c + down * sn;
        b[i] += -up * sn + down * c;
    }
    WalkState {
        coin: s.coin,
        t: s.t + 1,
        a,
        b,
    }
}

/// States for `t = 0..=steps`.
pub fn evolve(theta: f64, steps: usize) -> Vec<WalkState> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial_state(theta));
    for _ in 0..steps {
        let next = step(out.last().expect("non-empty"));
        out.push(next);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Distribution {
    /// Smallest position, i.e. `-t`.
    pub x_min: i64,
    pub p: Vec<f64>,
}

impl Distribution {
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.p.iter().enumerate().map(move |(i, &p)| (self.x_min + i as i64, p))
    }

    pub fn at(&self, x: i64) -> f64 {
        let i = x - self.x_min;
        if i < 0 {
            return 0.0;
        }
        self.p.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// `p_x(t) = |A_x(t)|² + |B_x(t)|²`.
pub fn probability_distribution(s: &WalkState) -> Distribution {
    Distribution {
        x_min: -(s.t as i64),
        p: s.a.iter().zip(&s.b).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn initial_amplitudes() {
        let s = initial_state(FRAC_PI_4);
        assert!((s.up(0) - c64(FRAC_1_SQRT_2, 0.)).norm() < 1e-16);
        assert!((s.down(0) - c64(0., FRAC_1_SQRT_2)).norm() < 1e-16);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn first_step_by_hand() {
        let s = step(&initial_state(FRAC_PI_4));
        assert!((s.up(1) - c64(0.5, 0.5)).norm() < 1e-15);
        assert!((s.down(-1) - c64(-0.5, 0.5)).norm() < 1e-15);
        assert_eq!(s.up(-1), c64(0., 0.));
        assert_eq!(s.down(1), c64(0., 0.));
        let d = probability_distribution(&s);
        assert!((d.at(1) - 0.5).abs() < 1e-15);
        assert!((d.at(-1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_coin_is_ballistic() {
        let states = evolve(0.0, 5);
        let s = &states[5];
        assert!((s.up(5) - c64(FRAC_1_SQRT_2, 0.)).norm() < 1e-15);
        assert!((s.down(-5) - c64(0., FRAC_1_SQRT_2)).norm() < 1e-15);
        let d = probability_distribution(s);
        assert!((d.at(5) - 0.5).abs() < 1e-15 && (d.at(-5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_steps() {
        let states = evolve(FRAC_PI_4, 0);
        assert_eq!(states, vec![initial_state(FRAC_PI_4)]);
        let d = probability_distribution(&states[0]);
        assert_eq!(d.p.len(), 1);
        assert!((d.p[0] - 1.0).abs() < 1e-15);
        assert_eq!(d.x_min, 0);
    }

    #[test]
    fn coin_angle_is_reduced() {
        assert!((CoinParams::new(-FRAC_PI_4).theta() - 7.0 * FRAC_PI_4).abs() < 1e-15);
        assert!(CoinParams::new(TAU).theta().abs() < 1e-15);
    }

    #[test]
    fn parity_symmetry_and_support() {
        for (t, s) in evolve(FRAC_PI_4, 30).iter().enumerate() {
            let d = probability_distribution(s);
            for (x, p) in d.iter() {
                if p > 0.0 {
                    assert_eq!((x + t as i64).rem_euclid(2), 0);
                }
                assert!((p - d.at(-x)).abs() < 1e-10);
            }
            if t > 0 {
                assert!(d.at(t as i64) > 0.0);
            }
            assert!((d.total() - 1.0).abs() < 1e-12);
        }
    }
}
