//! Correction of a simulated distribution toward a target expectation.
//!
//! Finds `delta` minimizing `sum_i w_i * delta_i^2` subject to
//!
//! ```text
//! sum_i delta_i       = 0
//! sum_i i * delta_i   = target          (i = 1..=7)
//! delta_i            >= -d_i
//! ```
//!
//! with `w_i = max(exp(-d_i / 100), 1e-12)`, i.e. bins measured as
//! probabilities, so large bins absorb more of the shift. Solved with a
//! primal active-set method started from a feasible two-bin vertex.

use alloc::vec::Vec;

use crate::distribution::{expectation, GuessDistribution, BINS};

const WEIGHT_FLOOR: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100;
const MULTIPLIER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QpSolution {
    pub delta: [f64; BINS],
    /// 1-based bins whose lower bound binds at the solution.
    pub active_set: Vec<usize>,
    pub objective: f64,
    /// The target actually enforced (differs from the request when clamped).
    pub target: f64,
    pub clamped: bool,
}

pub fn qp_weights(d: &[f64; BINS]) -> [f64; BINS] {
    d.map(|v| libm::exp(-v / 100.0).max(WEIGHT_FLOOR))
}

/// Objective value for a candidate correction.
pub fn qp_objective(d: &[f64; BINS], delta: &[f64; BINS]) -> f64 {
    qp_weights(d).iter().zip(delta).map(|(w, x)| w * x * x).sum()
}

fn idx(i: usize) -> f64 {
    (i + 1) as f64
}

/// Feasible interval for `sum_i i * delta_i`.
pub fn feasible_targets(d: &GuessDistribution) -> (f64, f64) {
    let e = d.expectation();
    (100.0 * (1.0 - e), 100.0 * (7.0 - e))
}

pub fn qp_correct(d_raw: &GuessDistribution, target: f64) -> QpSolution {
    let d = *d_raw.bins();
    let w = qp_weights(&d);
    let (lo, hi) = feasible_targets(d_raw);

    let (target, clamped) = if target.is_nan() {
        (0.0, true)
    } else if target < lo {
        (lo, true)
    } else if target > hi {
        (hi, true)
    } else {
        (target, false)
    };

    let mean = expectation(&d) + target / 100.0;
    // a target at either end leaves a single feasible point
    if mean <= 1.0 || mean >= 7.0 {
        let bin = if mean <= 1.0 { 0 } else { BINS - 1 };
        let mut delta = d.map(|v| -v);
        delta[bin] += 100.0;
        return finish(&d, &w, delta, target, clamped);
    }

    // start: all mass on the two bins around the target mean
    let low = (libm::floor(mean) as usize).clamp(1, BINS - 1) - 1;
    let mut p = [0.0; BINS];
    p[low] = 100.0 * (idx(low + 1) - mean);
    p[low + 1] = 100.0 * (mean - idx(low));
    let mut x: [f64; BINS] = core::array::from_fn(|i| p[i] - d[i]);
    let mut working = [true; BINS];
    working[low] = false;
    working[low + 1] = false;

    for _ in 0..MAX_ITERATIONS {
        let (x_eq, a, b) = solve_equality(&d, &w, &working, target);
        let step: [f64; BINS] = core::array::from_fn(|i| x_eq[i] - x[i]);
        let moving = step.iter().any(|s| s.abs() > 1e-14 * (1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
        let free = working.iter().filter(|w| !**w).count();

        if free <= 2 {
            // two free bins are pinned by the equalities: any step is roundoff
            for i in (0..BINS).filter(|&i| !working[i]) {
                x[i] = x_eq[i].max(-d[i]);
            }
        } else if moving {
            // largest step toward x_eq that keeps every free bound
            let mut alpha = 1.0;
            let mut blocking = None;
            for i in (0..BINS).filter(|&i| !working[i]) {
                if step[i] < 0.0 {
                    let room = (-d[i] - x[i]) / step[i];
                    if room < alpha {
                        alpha = room.max(0.0);
                        blocking = Some(i);
                    }
                }
            }
            for i in 0..BINS {
                x[i] += alpha * step[i];
            }
            if let Some(i) = blocking {
                x[i] = -d[i];
                working[i] = true;
                continue;
            }
        }

        // at the subspace minimizer: check bound multipliers
        let mut worst = None;
        let mut worst_value = -MULTIPLIER_TOL;
        for i in (0..BINS).filter(|&i| working[i]) {
            let nu = 2.0 * (w[i] * x[i] - a - b * idx(i));
            if nu < worst_value {
                worst_value = nu;
                worst = Some(i);
            }
        }
        match worst {
            Some(i) => working[i] = false,
            None => break,
        }
    }
    finish(&d, &w, x, target, clamped)
}

/// Minimizer over the affine set where bins in `working` sit on their bound.
/// Free bins take `x_i = (a + b * i) / w_i`; returns `(x, a, b)`.
fn solve_equality(
    d: &[f64; BINS],
    w: &[f64; BINS],
    working: &[bool; BINS],
    target: f64,
) -> ([f64; BINS], f64, f64) {
    let mut x = [0.0; BINS];
    let (mut r0, mut r1) = (0.0, target);
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for i in 0..BINS {
        if working[i] {
            x[i] = -d[i];
            r0 += d[i];
            r1 += idx(i) * d[i];
        } else {
            let v = 1.0 / w[i];
            s0 += v;
            s1 += v * idx(i);
            s2 += v * idx(i) * idx(i);
        }
    }
    let det = s0 * s2 - s1 * s1;
    let a = (r0 * s2 - r1 * s1) / det;
    let b = (s0 * r1 - s1 * r0) / det;
    for i in (0..BINS).filter(|&i| !working[i]) {
        x[i] = (a + b * idx(i)) / w[i];
    }
    (x, a, b)
}

fn finish(d: &[f64; BINS], w: &[f64; BINS], delta: [f64; BINS], target: f64, clamped: bool) -> QpSolution {
    let active_set = (0..BINS)
        .filter(|&i| (delta[i] + d[i]).abs() <= 1e-9)
        .map(|i| i + 1)
        .collect();
    let objective = w.iter().zip(&delta).map(|(w, x)| w * x * x).sum();
    QpSolution {
        delta,
        active_set,
        objective,
        target,
        clamped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(b: [f64; BINS]) -> GuessDistribution {
        GuessDistribution::new(b).unwrap()
    }

    #[test]
    fn integer_target_mean_starts_on_a_degenerate_vertex() {
        // the target mean is 6, so the starting vertex puts no mass on bin 7
        let d = dist([
            24.18091568034301,
            7.9722067073284455,
            17.488585595374094,
            0.0,
            20.382041651827134,
            7.963665099781355,
            22.012585265345955,
        ]);
        let s = qp_correct(&d, 203.62861840363234);
        assert!(s.delta.iter().sum::<f64>().abs() < 1e-9);
        let moment: f64 = s.delta.iter().enumerate().map(|(i, x)| idx(i) * x).sum();
        assert!((moment - s.target).abs() < 1e-9);
        assert!((0..BINS).all(|i| s.delta[i] >= -d.bins()[i] - 1e-9));
    }

    #[test]
    fn zero_target_is_no_change() {
        let s = qp_correct(&dist([0.0, 1.0, 11.0, 33.0, 39.0, 14.0, 2.0]), 0.0);
        assert!(s.delta.iter().all(|v| v.abs() < 1e-12), "{:?}", s.delta);
        assert!(s.objective < 1e-20);
        assert!(!s.clamped);
    }

    #[test]
    fn uniform_closed_form() {
        let u = dist([100.0 / 7.0; BINS]);
        let s = qp_correct(&u, 28.0);
        let expect = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
        for (got, want) in s.delta.iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "{:?}", s.delta);
        }
        assert!(s.active_set.is_empty());
    }

    #[test]
    fn eerie_row_shift() {
        let d = dist([0.0, 1.0, 11.0, 33.0, 39.0, 14.0, 2.0]);
        let s = qp_correct(&d, 35.2);
        let sum: f64 = s.delta.iter().sum();
        let moment: f64 = s.delta.iter().enumerate().map(|(i, v)| idx(i) * v).sum();
        assert!(sum.abs() < 1e-9 && (moment - 35.2).abs() < 1e-9);
        for i in 0..BINS {
            assert!(s.delta[i] >= -d.bins()[i] - 1e-9);
        }
        // the bin-1 and bin-2 mass is removed entirely
        assert_eq!(&s.active_set[..2], &[1, 2]);
    }

    #[test]
    fn clamps_infeasible_targets() {
        let d = dist([0.0, 1.0, 11.0, 33.0, 39.0, 14.0, 2.0]);
        let s = qp_correct(&d, 1000.0);
        assert!(s.clamped);
        assert!((s.target - 240.0).abs() < 1e-9);
        assert!((d.bins()[6] + s.delta[6] - 100.0).abs() < 1e-9);
        let s = qp_correct(&d, -1000.0);
        assert!(s.clamped);
        assert!((d.bins()[0] + s.delta[0] - 100.0).abs() < 1e-9);
    }
}
