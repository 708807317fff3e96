use log::warn;
use serde::{Deserialize, Serialize};

use super::{EngineError, Result, Trace};

pub const DEFAULT_R_TOL: f64 = 1e-6;
pub const DEFAULT_TAIL_FRACTION: f64 = 0.2;

/// Slack for the two interleaved monotone chains.
pub const CHAIN_SLACK: f64 = 1e-12;
/// Slack for `r_n^2 <= b_n^2 - a_{n+1}^2`.
pub const ENERGY_SLACK: f64 = 1e-12;
/// Slack for `sum r_n^2 <= b_1^2`.
pub const SUM_SLACK: f64 = 1e-9;
/// Slack for `r_{n+1} <= r_n` when classifying a tail as non-increasing.
const MONOTONE_SLACK: f64 = 1e-12;
/// Relative drop of the tail's lower envelope still counted as a stall.
const STALL_TOL: f64 = 1e-6;

/// Worst margins of the two-set inequalities over a trace. A margin is
/// "larger side minus smaller side", so negative values are violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSetReport {
    /// `s_1 >= r_1 >= s_2 >= r_2 >= ...`
    pub step_chain_margin: f64,
    pub step_chain_worst_n: usize,
    /// `a_1 >= b_1 >= a_2 >= b_2 >= ...`
    pub gap_chain_margin: f64,
    pub gap_chain_worst_n: usize,
    /// `b_n^2 - a_{n+1}^2 - r_n^2`
    pub energy_margin: f64,
    pub energy_worst_n: usize,
    /// `r_n - r_{n+1}`
    pub monotone_margin: f64,
    /// `sum_{n >= 1} r_n^2`
    pub r_sq_sum: f64,
    pub b1_sq: f64,
    pub checked_cycles: usize,
}

impl TwoSetReport {
    pub fn chains_hold(&self) -> bool {
        self.step_chain_margin >= -CHAIN_SLACK && self.gap_chain_margin >= -CHAIN_SLACK
    }

    pub fn energy_holds(&self) -> bool {
        self.energy_margin >= -ENERGY_SLACK
    }

    pub fn sum_holds(&self) -> bool {
        self.r_sq_sum <= self.b1_sq + SUM_SLACK
    }

    pub fn monotone(&self, slack: f64) -> bool {
        self.monotone_margin >= -slack
    }

    pub fn passes(&self) -> bool {
        self.chains_hold() && self.energy_holds() && self.sum_holds()
    }
}

fn track(worst: &mut (f64, usize), margin: f64, n: usize) {
    if margin < worst.0 {
        *worst = (margin, n);
    }
}

/// Checks the monotone chains, the energy inequality and the square-sum bound
/// of a two-set trace, from `n = 1` on.
pub fn two_set_diagnostics<P>(trace: &Trace<P>) -> Result<TwoSetReport> {
    let series = trace.two_set.as_ref().ok_or_else(|| {
        EngineError::Usage(format!(
            "two-set diagnostics need a trace over 2 sets, got {}",
            trace.set_count
        ))
    })?;
    let cycles = trace.cycles();
    if cycles < 2 {
        return Err(EngineError::Usage(
            "two-set diagnostics need at least 2 cycles".into(),
        ));
    }
    let mut step_chain = (f64::INFINITY, 0);
    let mut gap_chain = (f64::INFINITY, 0);
    let mut energy = (f64::INFINITY, 0);
    let mut monotone = f64::INFINITY;
    let mut r_sq_sum = 0.0;
    for n in 1..cycles {
        let r = trace.steps[n];
        let (a, b, s) = (series.a[n], series.b[n], series.s[n]);
        track(&mut step_chain, s - r, n);
        if let Some(s_next) = series.s(n + 1) {
            track(&mut step_chain, r - s_next, n);
        }
        track(&mut gap_chain, a - b, n);
        if let Some(a_next) = series.a(n + 1) {
            track(&mut gap_chain, b - a_next, n);
            track(&mut energy, b * b - a_next * a_next - r * r, n);
        }
        if let Some(r_next) = trace.r(n + 1) {
            monotone = monotone.min(r - r_next);
        }
        r_sq_sum += r * r;
    }
    let b1 = series.b[1];
    Ok(TwoSetReport {
        step_chain_margin: step_chain.0,
        step_chain_worst_n: step_chain.1,
        gap_chain_margin: gap_chain.0,
        gap_chain_worst_n: gap_chain.1,
        energy_margin: energy.0,
        energy_worst_n: energy.1,
        monotone_margin: monotone,
        r_sq_sum,
        b1_sq: b1 * b1,
        checked_cycles: cycles - 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub used: usize,
    pub excluded: usize,
}

/// Least-squares line through `(ln n, ln r_n)`; nonpositive `r_n` and `n = 0`
/// are skipped.
pub fn fit_power_law<I>(points: I) -> Result<RateFit>
where
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut excluded = 0;
    for (n, r) in points {
        if n == 0 || !r.is_finite() || r <= 0.0 {
            excluded += 1;
            continue;
        }
        xs.push((n as f64).ln());
        ys.push(r.ln());
    }
    if excluded > 0 {
        warn!("rate fit: excluded {excluded} indices with r_n = 0 or n = 0");
    }
    if xs.len() < 2 {
        return Err(EngineError::Usage(format!(
            "rate fit needs at least 2 positive steps, got {}",
            xs.len()
        )));
    }
    let count = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / count;
    let my = ys.iter().sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return Err(EngineError::Usage(
            "rate fit window spans a single index".into(),
        ));
    }
    let slope = sxy / sxx;
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
        used: xs.len(),
        excluded,
    })
}

/// Fits `ln r_n` against `ln n` for `n` in the inclusive `window`.
pub fn rate_fit<P>(trace: &Trace<P>, window: (usize, usize)) -> Result<RateFit> {
    let (lo, hi) = window;
    if lo > hi || lo >= trace.cycles() {
        return Err(EngineError::Usage(format!(
            "window [{lo}, {hi}] outside the trace's {} cycles",
            trace.cycles()
        )));
    }
    let hi = hi.min(trace.cycles() - 1);
    fit_power_law((lo..=hi).map(|n| (n, trace.steps[n])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Regular,
    NotRegular,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub classification: Classification,
    pub final_r: f64,
    /// Minimum step over the tail.
    pub liminf_r: f64,
    /// Fitted power-law slope over the tail when every tail step is positive.
    pub rate_slope: Option<f64>,
}

/// Classifies a trace from the tail of its step sequence.
///
/// * `Regular`: the last step is below `r_tol` and the tail is non-increasing.
/// * `NotRegular`: every tail step exceeds `10 * r_tol` and the lower envelope
///   of the tail does not decay (the second half's minimum is not below the
///   first half's, up to a relative `1e-6`).
/// * `Inconclusive` otherwise, including slowly decaying sequences that are
///   still far above `r_tol`.
pub fn verdict<P>(trace: &Trace<P>, r_tol: f64, tail_fraction: f64) -> RegularityVerdict {
    let steps = &trace.steps;
    if steps.is_empty() {
        return RegularityVerdict {
            classification: Classification::Inconclusive,
            final_r: f64::NAN,
            liminf_r: f64::NAN,
            rate_slope: None,
        };
    }
    let len = steps.len();
    let tail_len = ((tail_fraction * len as f64).ceil() as usize).clamp(1, len);
    let tail_start = len - tail_len;
    let tail = &steps[tail_start..];
    let final_r = steps[len - 1];
    let liminf_r = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    let stalled = tail_len >= 2 && {
        let (early, late) = tail.split_at(tail_len / 2);
        let min_early = early.iter().copied().fold(f64::INFINITY, f64::min);
        let min_late = late.iter().copied().fold(f64::INFINITY, f64::min);
        min_late >= (1.0 - STALL_TOL) * min_early
    };
    let classification = if final_r < r_tol && non_increasing {
        Classification::Regular
    } else if liminf_r > 10.0 * r_tol && stalled {
        Classification::NotRegular
    } else {
        Classification::Inconclusive
    };
    let rate_slope = if tail_len >= 2 && tail.iter().all(|r| *r > 0.0) {
        fit_power_law((tail_start..len).map(|n| (n, steps[n])))
            .ok()
            .map(|f| f.slope)
    } else {
        None
    };
    RegularityVerdict {
        classification,
        final_r,
        liminf_r,
        rate_slope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(steps: Vec<f64>) -> Trace<()> {
        Trace {
            start: (),
            set_count: 3,
            steps,
            two_set: None,
            snapshots: Vec::new(),
            last: (),
            stride: 1,
            aborted: None,
        }
    }

    #[test]
    fn power_law_slope_is_recovered() {
        let trace = synthetic((0..2000).map(|n| (n.max(1) as f64).powf(-0.6)).collect());
        let fit = rate_fit(&trace, (1, 1999)).unwrap();
        assert!((fit.slope + 0.6).abs() < 1e-3);
        assert_eq!(fit.used, 1999);
    }

    #[test]
    fn constant_steps_have_flat_slope() {
        let trace = synthetic(vec![1.0; 100]);
        assert!(rate_fit(&trace, (1, 99)).unwrap().slope.abs() < 1e-9);
    }

    #[test]
    fn zero_steps_are_excluded() {
        let trace = synthetic(vec![1.0, 0.5, 0.0, 0.25, 0.125]);
        let fit = rate_fit(&trace, (1, 4)).unwrap();
        assert_eq!(fit.excluded, 1);
        assert_eq!(fit.used, 3);
        assert!(rate_fit(&synthetic(vec![1.0, 0.0, 0.0]), (1, 2)).is_err());
        assert!(rate_fit(&synthetic(vec![1.0; 3]), (5, 9)).is_err());
    }

    #[test]
    fn verdict_classes() {
        let v = verdict(
            &synthetic(vec![1.0; 100]),
            DEFAULT_R_TOL,
            DEFAULT_TAIL_FRACTION,
        );
        assert_eq!(v.classification, Classification::NotRegular);
        assert_eq!(v.liminf_r, 1.0);

        let halving = (0..200).map(|n| 0.5f64.powi(n + 1)).collect();
        let v = verdict(&synthetic(halving), DEFAULT_R_TOL, DEFAULT_TAIL_FRACTION);
        assert_eq!(v.classification, Classification::Regular);

        let slow = (1..=100).map(|n| (n as f64).powf(-0.6)).collect();
        let v = verdict(&synthetic(slow), DEFAULT_R_TOL, DEFAULT_TAIL_FRACTION);
        assert_eq!(v.classification, Classification::Inconclusive);
        assert!(v.rate_slope.unwrap() < 0.0);

        let v = verdict(&synthetic(vec![]), DEFAULT_R_TOL, DEFAULT_TAIL_FRACTION);
        assert_eq!(v.classification, Classification::Inconclusive);
    }

    #[test]
    fn periodic_steps_count_as_stalled() {
        let steps = (0..100)
            .map(|n| if n % 2 == 0 { 1.0 } else { 0.5 })
            .collect();
        let v = verdict(&synthetic(steps), DEFAULT_R_TOL, DEFAULT_TAIL_FRACTION);
        assert_eq!(v.classification, Classification::NotRegular);
        assert_eq!(v.liminf_r, 0.5);
    }

    #[test]
    fn diagnostics_need_two_sets() {
        let err = two_set_diagnostics(&synthetic(vec![1.0; 10])).unwrap_err();
        assert!(matches!(err, EngineError::Usage(_)));
    }
}
