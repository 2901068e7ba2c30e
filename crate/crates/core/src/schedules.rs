//! Investment and saving schedules over a grid of control rates.
//!
//! In full-equilibrium mode every point is a solved equilibrium, so
//! `S0N + S1X = I0` holds at each rate and the curves never separate: the
//! whole curve is an "intersection". Partial mode holds the future trade
//! balance at its value at a reference rate, so external saving moves only
//! through discounting. National saving and investment stay at their
//! equilibrium values. The resulting saving curve slopes upward and crosses
//! investment exactly at the reference rate.

use crate::error::{domain, ModelError, Result};
use crate::model::{check_rate, solve_at_rate, ModelInstance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleMode {
    FullEquilibrium,
    /// Future trade balance frozen at its value at `r_ref`.
    Partial { r_ref: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Slopes {
    pub i0: f64,
    pub s0n: f64,
    pub s1x: f64,
    /// Slope of `S0N + S1X`.
    pub saving: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleCurve {
    pub mode: ScheduleMode,
    pub grid: Vec<f64>,
    pub i0: Vec<f64>,
    pub s0n: Vec<f64>,
    pub s1x: Vec<f64>,
    /// `S0N + S1X - I0` per point.
    pub residual: Vec<f64>,
    /// Present output per point, the scale for residual checks.
    pub y0: Vec<f64>,
    pub slopes: Vec<Slopes>,
    /// Grid points dropped because the model failed there.
    pub skipped: Vec<(f64, ModelError)>,
}

impl ScheduleCurve {
    pub fn is_flagged(&self) -> bool {
        !self.skipped.is_empty()
    }

    pub fn saving(&self, i: usize) -> f64 {
        self.s0n[i] + self.s1x[i]
    }

    /// Largest `|residual|` relative to the largest present output.
    pub fn max_scaled_residual(&self) -> f64 {
        let scale = self.y0.iter().copied().fold(0.0, f64::max);
        self.residual.iter().map(|r| r.abs()).fold(0.0, f64::max) / scale
    }

    /// Rates where the residual changes sign, by linear interpolation.
    pub fn crossings(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.grid.len().saturating_sub(1) {
            let (a, b) = (self.residual[i], self.residual[i + 1]);
            if a == 0.0 {
                out.push(self.grid[i]);
            } else if a.signum() != b.signum() && b != 0.0 {
                let t = a / (a - b);
                out.push(self.grid[i] + t * (self.grid[i + 1] - self.grid[i]));
            }
        }
        if self.residual.last() == Some(&0.0) {
            out.push(*self.grid.last().expect("non-empty"));
        }
        out
    }
}

/// `points` evenly spaced rates from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { stop } else { start + step * i as f64 }).collect()
        }
    }
}

/// 41 points on `[max(0.01, r_ref - 0.2), r_ref + 0.2]`.
pub fn default_grid(r_ref: f64) -> Vec<f64> {
    linspace((r_ref - 0.2).max(0.01), r_ref + 0.2, 41)
}

/// Evaluates the schedules on `grid`.
pub fn compute_schedules(inst: &ModelInstance, grid: &[f64], mode: ScheduleMode) -> Result<ScheduleCurve> {
    inst.validate()?;
    if grid.is_empty() {
        return Err(ModelError::TooFewPoints { needed: 1, got: 0 });
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(domain("schedule grid must be strictly increasing"));
    }
    for &r in grid {
        check_rate(inst.technology.delta, r)?;
    }
    let frozen_tb1 = match mode {
        ScheduleMode::FullEquilibrium => None,
        ScheduleMode::Partial { r_ref } => {
            let (lo, hi) = (grid[0], grid[grid.len() - 1]);
            if !(r_ref >= lo && r_ref <= hi) {
                return Err(domain(format!("reference rate {r_ref} lies outside the grid [{lo}, {hi}]")));
            }
            Some(solve_at_rate(inst, r_ref)?.future.trade_balance)
        }
    };

    let mut curve = ScheduleCurve {
        mode,
        grid: Vec::with_capacity(grid.len()),
        i0: Vec::with_capacity(grid.len()),
        s0n: Vec::with_capacity(grid.len()),
        s1x: Vec::with_capacity(grid.len()),
        residual: Vec::with_capacity(grid.len()),
        y0: Vec::with_capacity(grid.len()),
        slopes: Vec::new(),
        skipped: Vec::new(),
    };
    for &r in grid {
        let eq = match solve_at_rate(inst, r) {
            Ok(eq) => eq,
            Err(e) => {
                curve.skipped.push((r, e));
                continue;
            }
        };
        let s1x = match frozen_tb1 {
            None => eq.external_saving,
            Some(tb1) => tb1 / (1.0 + r),
        };
        curve.grid.push(r);
        curve.i0.push(eq.investment);
        curve.s0n.push(eq.national_saving);
        curve.s1x.push(s1x);
        curve.residual.push(eq.national_saving + s1x - eq.investment);
        curve.y0.push(eq.present.output);
    }
    curve.slopes = pointwise_slopes(&curve);
    Ok(curve)
}

fn gradient(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (y[b] - y[a]) / (x[b] - x[a])
        })
        .collect()
}

fn pointwise_slopes(c: &ScheduleCurve) -> Vec<Slopes> {
    let saving: Vec<f64> = (0..c.grid.len()).map(|i| c.saving(i)).collect();
    let di = gradient(&c.grid, &c.i0);
    let ds0 = gradient(&c.grid, &c.s0n);
    let ds1 = gradient(&c.grid, &c.s1x);
    let ds = gradient(&c.grid, &saving);
    (0..c.grid.len())
        .map(|i| Slopes { i0: di[i], s0n: ds0[i], s1x: ds1[i], saving: ds[i] })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSlope {
    pub r_lo: f64,
    pub r_hi: f64,
    pub d_saving: f64,
    pub d_investment: f64,
    /// Saving does not rise with the rate on this partial-mode segment.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub segments: Vec<SegmentSlope>,
}

impl SlopeReport {
    pub fn investment_decreasing(&self) -> bool {
        self.segments.iter().all(|s| s.d_investment < 0.0)
    }

    pub fn saving_increasing(&self) -> bool {
        self.segments.iter().all(|s| s.d_saving > 0.0)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &SegmentSlope> {
        self.segments.iter().filter(|s| s.flagged)
    }
}

/// Per-segment slope signs of total saving and investment.
pub fn slope_check(curve: &ScheduleCurve) -> Result<SlopeReport> {
    let n = curve.grid.len();
    if n < 3 {
        return Err(ModelError::TooFewPoints { needed: 3, got: n });
    }
    let partial = matches!(curve.mode, ScheduleMode::Partial { .. });
    let segments = (0..n - 1)
        .map(|i| {
            let dr = curve.grid[i + 1] - curve.grid[i];
            let d_saving = (curve.saving(i + 1) - curve.saving(i)) / dr;
            let d_investment = (curve.i0[i + 1] - curve.i0[i]) / dr;
            SegmentSlope {
                r_lo: curve.grid[i],
                r_hi: curve.grid[i + 1],
                d_saving,
                d_investment,
                flagged: partial && d_saving <= 0.0,
            }
        })
        .collect();
    Ok(SlopeReport { segments })
}
