//! Direct, stepwise, slope-sweep and sample-size convergence runs.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, PenaltyMetric};
use crate::error::{Error, Result};
use crate::numerics::Mat4;
use crate::purification::{purify, reduce, PurifiedState};
use crate::synthesis::{derive_seed, fix_phase, sample_target, stepwise_factor, UnitarySequence};
use crate::walk::evolve;

use super::{cost, extract_response, fit_slope, LinearFit};

const CONVERGENCE_TAG: u64 = 0x636f_6e76;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Direct,
    Stepwise,
}

/// Which cost picks the stepwise candidate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectRule {
    /// Minimize the cost of `U_t U_{t-1}†`.
    #[default]
    Increment,
    /// Minimize the cost of `U_t` itself.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRow {
    pub t: usize,
    /// `C(t)` for direct runs, the increment `C'_t` for stepwise runs.
    pub value: f64,
    pub cumulative: Option<f64>,
    pub sample_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub mode: Mode,
    pub theta: f64,
    pub k: u32,
    pub mu: f64,
    pub samples: usize,
    pub master_seed: u64,
    pub select: Option<SelectRule>,
    pub rows: Vec<StepRow>,
    /// Fit of `C(t)` (direct) or of the cumulative series (stepwise).
    pub fit: Option<LinearFit>,
}

impl ComplexityReport {
    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.cumulative).collect()
    }

    pub fn mean(&self) -> f64 {
        self.values().iter().sum::<f64>() / self.rows.len().max(1) as f64
    }
}

fn check_run(steps: usize, samples: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    Ok(())
}

/// Purified states for `t = 1..=steps`.
fn purified_series(theta: f64, steps: usize) -> Vec<PurifiedState> {
    evolve(theta, steps)
        .iter()
        .skip(1)
        .map(|s| purify(&reduce(s)))
        .collect()
}

pub(crate) fn unitary_cost(u: &Mat4, p: &PenaltyMetric) -> Result<f64> {
    let (su, _) = fix_phase(u);
    Ok(cost(&extract_response(&su, &Algebra::shared().basis)?, p))
}

/// Lowest value, ties to the lowest index.
fn argmin(costs: &[f64]) -> (usize, f64) {
    costs
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &c)| if c < best.1 { (i, c) } else { best })
}

fn sample_all(
    phi: &PurifiedState,
    step: usize,
    samples: usize,
    master_seed: u64,
) -> Result<Vec<Mat4>> {
    (0..samples)
        .into_par_iter()
        .map(|j| sample_target(phi, step, j, master_seed).map(|tu| tu.u))
        .collect()
}

fn costs_of<F>(candidates: &[Mat4], f: F) -> Result<Vec<f64>>
where
    F: Fn(&Mat4) -> Result<f64> + Sync + Send,
{
    candidates.par_iter().map(f).collect()
}

pub fn direct_complexity(
    theta: f64,
    steps: usize,
    p: &PenaltyMetric,
    samples: usize,
    master_seed: u64,
) -> Result<ComplexityReport> {
    check_run(steps, samples)?;
    let mut rows = Vec::with_capacity(steps);
    for (i, phi) in purified_series(theta, steps).iter().enumerate() {
        let t = i + 1;
        let candidates = sample_all(phi, t, samples, master_seed)?;
        let costs = costs_of(&candidates, |u| unitary_cost(u, p))?;
        let (j, c) = argmin(&costs);
        rows.push(StepRow {
            t,
            value: c,
            cumulative: None,
            sample_index: j,
        });
    }
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    Ok(ComplexityReport {
        mode: Mode::Direct,
        theta,
        k: p.k,
        mu: p.mu,
        samples,
        master_seed,
        select: None,
        rows,
        fit: fit_slope(&values).ok(),
    })
}

/// Stepwise run that also returns the chosen unitaries and their factors.
pub fn stepwise_run(
    theta: f64,
    steps: usize,
    p: &PenaltyMetric,
    samples: usize,
    master_seed: u64,
    select: SelectRule,
) -> Result<(ComplexityReport, UnitarySequence)> {
    check_run(steps, samples)?;
    let mut prev = Mat4::identity();
    let mut total = 0.0;
    let mut rows = Vec::with_capacity(steps);
    let mut chosen = Vec::with_capacity(steps);
    for (i, phi) in purified_series(theta, steps).iter().enumerate() {
        let t = i + 1;
        let candidates = sample_all(phi, t, samples, master_seed)?;
        let j = match select {
            SelectRule::Increment => {
                argmin(&costs_of(&candidates, |u| unitary_cost(&stepwise_factor(u, &prev), p))?).0
            }
            SelectRule::Direct => argmin(&costs_of(&candidates, |u| unitary_cost(u, p))?).0,
        };
        let u = candidates[j];
        let inc = unitary_cost(&stepwise_factor(&u, &prev), p)?;
        total += inc;
        rows.push(StepRow {
            t,
            value: inc,
            cumulative: Some(total),
            sample_index: j,
        });
        chosen.push(u);
        prev = u;
    }
    let cumulative: Vec<f64> = rows.iter().filter_map(|r| r.cumulative).collect();
    let report = ComplexityReport {
        mode: Mode::Stepwise,
        theta,
        k: p.k,
        mu: p.mu,
        samples,
        master_seed,
        select: Some(select),
        rows,
        fit: fit_slope(&cumulative).ok(),
    };
    Ok((report, UnitarySequence::from_chosen(master_seed, chosen)?))
}

pub fn stepwise_complexity(
    theta: f64,
    steps: usize,
    p: &PenaltyMetric,
    samples: usize,
    master_seed: u64,
) -> Result<ComplexityReport> {
    stepwise_run(theta, steps, p, samples, master_seed, SelectRule::default()).map(|r| r.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeRow {
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r2: f64,
}

pub fn slope_sweep(
    theta_grid: &[f64],
    steps: usize,
    p: &PenaltyMetric,
    samples: usize,
    master_seed: u64,
    select: SelectRule,
) -> Result<Vec<SlopeRow>> {
    if theta_grid.is_empty() {
        return Err(Error::InvalidParameter("theta grid is empty".into()));
    }
    if steps < 3 {
        return Err(Error::InvalidParameter("slope sweep needs steps >= 3".into()));
    }
    theta_grid
        .iter()
        .map(|&theta| {
            let (report, _) = stepwise_run(theta, steps, p, samples, master_seed, select)?;
            let fit = report.fit.expect("steps >= 3");
            Ok(SlopeRow {
                theta,
                alpha: fit.alpha,
                beta: fit.beta,
                r2: fit.r2,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub samples: usize,
    pub stddev: f64,
    pub mean: f64,
}

/// Spread of the min-over-`S` direct cost at one step, across independent trials.
pub fn convergence_study(
    theta: f64,
    step: usize,
    sample_sizes: &[usize],
    trials: usize,
    p: &PenaltyMetric,
    master_seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    if trials < 2 {
        return Err(Error::InvalidParameter("convergence needs trials >= 2".into()));
    }
    if step == 0 {
        return Err(Error::InvalidParameter("step must be >= 1".into()));
    }
    if sample_sizes.is_empty() || sample_sizes.contains(&0) {
        return Err(Error::InvalidParameter("sample sizes must be non-empty and positive".into()));
    }
    if sample_sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("sample sizes must be ascending".into()));
    }
    let phi = purify(&reduce(&evolve(theta, step)[step]));
    sample_sizes
        .iter()
        .map(|&size| {
            let minima = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let sub = derive_seed(master_seed, &[CONVERGENCE_TAG, size as u64, trial as u64]);
                    let candidates = (0..size)
                        .map(|j| sample_target(&phi, step, j, sub).map(|tu| tu.u))
                        .collect::<Result<Vec<_>>>()?;
                    let costs = candidates
                        .iter()
                        .map(|u| unitary_cost(u, p))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(argmin(&costs).1)
                })
                .collect::<Result<Vec<f64>>>()?;
            let n = minima.len() as f64;
            let mean = minima.iter().sum::<f64>() / n;
            let var = minima.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            Ok(ConvergenceRow {
                samples: size,
                stddev: var.sqrt(),
                mean,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::penalty_metric;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn argmin_ties_to_lowest() {
        assert_eq!(argmin(&[3.0, 1.0, 1.0, 2.0]), (1, 1.0));
    }

    #[test]
    fn direct_is_deterministic() {
        let p = penalty_metric(2, 100.0).unwrap();
        let a = direct_complexity(FRAC_PI_4, 4, &p, 1, 9).unwrap();
        let b = direct_complexity(FRAC_PI_4, 4, &p, 1, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.rows.iter().all(|r| r.value >= 0.0 && r.sample_index == 0));
    }

    #[test]
    fn stepwise_cumulative_non_decreasing() {
        let p = penalty_metric(2, 100.0).unwrap();
        let r = stepwise_complexity(FRAC_PI_4, 6, &p, 8, 3).unwrap();
        let c = r.cumulative();
        assert!(c.windows(2).all(|w| w[1] >= w[0]));
        assert!(r.fit.is_some());
    }

    #[test]
    fn first_step_increment_is_direct_cost() {
        let p = penalty_metric(2, 100.0).unwrap();
        let (r, seq) = stepwise_run(FRAC_PI_4, 1, &p, 5, 1, SelectRule::Increment).unwrap();
        let direct = unitary_cost(&seq.chosen[0], &p).unwrap();
        assert!((r.rows[0].value - direct).abs() < 1e-15);
        let d = direct_complexity(FRAC_PI_4, 1, &p, 5, 1).unwrap();
        assert!((d.rows[0].value - direct).abs() < 1e-15);
    }

    #[test]
    fn theta_periodicity_in_sweep() {
        let p = penalty_metric(2, 100.0).unwrap();
        let theta = 2.0 * std::f64::consts::PI / 3.0;
        let rows = slope_sweep(&[theta, theta + std::f64::consts::TAU], 4, &p, 4, 2, SelectRule::Increment)
            .unwrap();
        assert!((rows[0].alpha - rows[1].alpha).abs() < 1e-9);
        assert_eq!(slope_sweep(&[theta], 4, &p, 2, 2, SelectRule::Increment).unwrap().len(), 1);
    }

    #[test]
    fn convergence_is_reproducible() {
        let p = penalty_metric(2, 100.0).unwrap();
        let a = convergence_study(FRAC_PI_4, 3, &[1, 4], 2, &p, 5).unwrap();
        let b = convergence_study(FRAC_PI_4, 3, &[1, 4], 2, &p, 5).unwrap();
        assert_eq!(a, b);
        assert!(convergence_study(FRAC_PI_4, 3, &[4, 1], 2, &p, 5).is_err());
        assert!(convergence_study(FRAC_PI_4, 3, &[4], 1, &p, 5).is_err());
    }

    #[test]
    fn size_one_stddev_is_spread_of_single_draws() {
        let p = penalty_metric(2, 100.0).unwrap();
        let trials = 5;
        let row = &convergence_study(FRAC_PI_4, 2, &[1], trials, &p, 8).unwrap()[0];
        let phi = purify(&reduce(&evolve(FRAC_PI_4, 2)[2]));
        let draws: Vec<f64> = (0..trials)
            .map(|trial| {
                let sub = derive_seed(8, &[CONVERGENCE_TAG, 1, trial as u64]);
                unitary_cost(&sample_target(&phi, 2, 0, sub).unwrap().u, &p).unwrap()
            })
            .collect();
        let m = draws.iter().sum::<f64>() / trials as f64;
        let sd = (draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (trials as f64 - 1.0)).sqrt();
        assert!((row.stddev - sd).abs() < 1e-12);
    }
}
