//! Rules for choosing the control rate.
//!
//! The equilibrium system leaves the rate free, so any admissible rate is
//! internally consistent. The strategies here pick one by an explicit
//! criterion; none of them is claimed to be the rule behind the published
//! scenario rates.

use crate::error::{ModelError, Result};
use crate::model::{check_rate, solve_at_rate, Equilibrium, ModelInstance};

pub const DEFAULT_BRACKET: (f64, f64) = (0.01, 2.0);
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum ClosureKind {
    /// Use the given rate unchanged.
    Fixed { rate: f64 },
    /// Rate at which present (and therefore future) trade is balanced.
    BalancedTrade,
    /// Rate at which `tb0 / Y0` equals the target share.
    TradeShareTarget { target: f64 },
    /// Grid rate with the highest lifetime utility.
    WelfareSweep { grid: Vec<f64> },
}

impl ClosureKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClosureKind::Fixed { .. } => "fixed",
            ClosureKind::BalancedTrade => "balanced_trade",
            ClosureKind::TradeShareTarget { .. } => "trade_share_target",
            ClosureKind::WelfareSweep { .. } => "welfare_sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureSpec {
    pub kind: ClosureKind,
    pub bracket: (f64, f64),
    /// Relative convergence tolerance.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl ClosureSpec {
    pub fn new(kind: ClosureKind) -> Self {
        ClosureSpec {
            kind,
            bracket: DEFAULT_BRACKET,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn fixed(rate: f64) -> Self {
        Self::new(ClosureKind::Fixed { rate })
    }

    pub fn with_bracket(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = (lo, hi);
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    /// Checks the spec against the instance's admissible rate domain.
    pub fn validate(&self, inst: &ModelInstance) -> Result<()> {
        let delta = inst.technology.delta;
        let invalid = |msg: String| Err(ModelError::InvalidClosure(msg));
        match &self.kind {
            ClosureKind::Fixed { rate } => return check_rate(delta, *rate),
            ClosureKind::WelfareSweep { grid } => {
                if grid.is_empty() {
                    return invalid("welfare sweep needs a non-empty grid".into());
                }
                for &r in grid {
                    check_rate(delta, r)?;
                }
                return Ok(());
            }
            ClosureKind::TradeShareTarget { target } if !target.is_finite() => {
                return invalid(format!("target share must be finite, got {target}"));
            }
            _ => {}
        }
        let (lo, hi) = self.bracket;
        if !(lo < hi) {
            return invalid(format!("bracket must satisfy lo < hi, got [{lo}, {hi}]"));
        }
        check_rate(delta, lo)?;
        check_rate(delta, hi)?;
        if !(self.tolerance > 0.0) {
            return invalid(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.max_iterations == 0 {
            return invalid("max_iterations must be at least 1".into());
        }
        Ok(())
    }
}

/// What a closure did to arrive at its rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureReport {
    pub strategy: &'static str,
    pub rate: f64,
    /// Bisection steps or grid evaluations; zero for a fixed rate.
    pub iterations: usize,
    /// Objective value at the returned rate (scaled residual or utility).
    pub objective: Option<f64>,
    /// Final bracket for root-finding strategies.
    pub bracket: Option<(f64, f64)>,
}

/// Picks the control rate for `inst` according to `spec`.
pub fn resolve_rate(inst: &ModelInstance, spec: &ClosureSpec) -> Result<ClosureReport> {
    spec.validate(inst)?;
    match &spec.kind {
        ClosureKind::Fixed { rate } => Ok(ClosureReport {
            strategy: spec.kind.name(),
            rate: *rate,
            iterations: 0,
            objective: None,
            bracket: None,
        }),
        ClosureKind::BalancedTrade => {
            let objective = |eq: &Equilibrium| eq.present.trade_balance / eq.present.output;
            bisect_rate(inst, spec, objective)
        }
        ClosureKind::TradeShareTarget { target } => {
            let target = *target;
            let objective = |eq: &Equilibrium| eq.present.trade_balance / eq.present.output - target;
            bisect_rate(inst, spec, objective)
        }
        ClosureKind::WelfareSweep { grid } => {
            let mut best: Option<(f64, f64)> = None;
            for &r in grid {
                let u = solve_at_rate(inst, r)?.welfare;
                best = match best {
                    Some((br, bu)) if bu > u || (bu == u && br <= r) => Some((br, bu)),
                    _ => Some((r, u)),
                };
            }
            let (rate, u) = best.expect("grid validated non-empty");
            Ok(ClosureReport {
                strategy: spec.kind.name(),
                rate,
                iterations: grid.len(),
                objective: Some(u),
                bracket: None,
            })
        }
    }
}

/// Bisection on a scaled objective `f(eq)`; stops when `|f| <= tol` or the
/// bracket is narrower than `tol`.
fn bisect_rate<F>(inst: &ModelInstance, spec: &ClosureSpec, f: F) -> Result<ClosureReport>
where
    F: Fn(&Equilibrium) -> f64,
{
    let eval = |r: f64| solve_at_rate(inst, r).map(|eq| f(&eq));
    let (mut lo, mut hi) = spec.bracket;
    let tol = spec.tolerance;
    let mut f_lo = eval(lo)?;
    let f_hi = eval(hi)?;

    let report = |rate: f64, value: f64, iterations: usize, lo: f64, hi: f64| ClosureReport {
        strategy: spec.kind.name(),
        rate,
        iterations,
        objective: Some(value),
        bracket: Some((lo, hi)),
    };
    if f_lo.abs() <= tol {
        return Ok(report(lo, f_lo, 0, lo, hi));
    }
    if f_hi.abs() <= tol {
        return Ok(report(hi, f_hi, 0, lo, hi));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(ModelError::NoSignChange { lo, hi, f_lo, f_hi });
    }

    for iteration in 1..=spec.max_iterations {
        let mid = lo + 0.5 * (hi - lo);
        let f_mid = eval(mid)?;
        if f_mid.abs() <= tol || hi - lo <= tol {
            return Ok(report(mid, f_mid, iteration, lo, hi));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(ModelError::NonConvergence { iterations: spec.max_iterations, width: hi - lo })
}

/// Difference `U(r + h) - U(r - h)` of lifetime utility across `r_star`.
pub fn welfare_stationarity_check(inst: &ModelInstance, r_star: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(ModelError::Domain(format!("step must be positive, got {h}")));
    }
    let up = solve_at_rate(inst, r_star + h)?.welfare;
    let down = solve_at_rate(inst, r_star - h)?.welfare;
    Ok(up - down)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rate_is_identity_even_when_model_would_fail() {
        let base = ModelInstance::baseline();
        let out = resolve_rate(&base, &ClosureSpec::fixed(0.4821)).unwrap();
        assert_eq!(out.rate, 0.4821);
        assert_eq!(out.iterations, 0);

        // Infeasible fiscal policy: any model evaluation would error.
        let mut broke = base;
        broke.fiscal.g0 = 1e9;
        assert!(solve_at_rate(&broke, 0.3).is_err());
        assert_eq!(resolve_rate(&broke, &ClosureSpec::fixed(0.3)).unwrap().rate, 0.3);
    }

    #[test]
    fn balanced_trade_root_balances_both_periods() {
        let inst = ModelInstance::baseline();
        let spec = ClosureSpec::new(ClosureKind::BalancedTrade).with_bracket(0.4821, 1.2);
        let out = resolve_rate(&inst, &spec).unwrap();
        let eq = solve_at_rate(&inst, out.rate).unwrap();
        assert!(eq.present.trade_balance.abs() <= 1e-10 * eq.present.output);
        assert!(eq.future.trade_balance.abs() <= 1e-9 * eq.future.output);
        assert!(out.rate > 0.4821);

        let bound = ((1.2f64 - 0.4821) / spec.tolerance).log2().ceil() as usize + 2;
        assert!(out.iterations <= bound, "{} > {bound}", out.iterations);
    }

    #[test]
    fn trade_share_target_roundtrips_published_share() {
        let inst = ModelInstance::baseline();
        let spec = ClosureSpec::new(ClosureKind::TradeShareTarget { target: -0.1549 })
            .with_bracket(0.3, 0.7);
        let out = resolve_rate(&inst, &spec).unwrap();
        assert!((out.rate - 0.4821).abs() < 1e-4, "{}", out.rate);
    }

    #[test]
    fn bracket_without_sign_change_is_reported() {
        let inst = ModelInstance::baseline();
        let spec = ClosureSpec::new(ClosureKind::BalancedTrade).with_bracket(0.1, 0.4);
        assert!(matches!(resolve_rate(&inst, &spec), Err(ModelError::NoSignChange { .. })));
    }

    #[test]
    fn iteration_cap_is_enforced() {
        let inst = ModelInstance::baseline();
        let spec = ClosureSpec::new(ClosureKind::BalancedTrade)
            .with_bracket(0.4821, 2.0)
            .with_max_iterations(3);
        assert!(matches!(resolve_rate(&inst, &spec), Err(ModelError::NonConvergence { iterations: 3, .. })));
    }

    #[test]
    fn invalid_specs_rejected() {
        let inst = ModelInstance::baseline();
        let bad_bracket = ClosureSpec::new(ClosureKind::BalancedTrade).with_bracket(0.8, 0.2);
        assert!(matches!(resolve_rate(&inst, &bad_bracket), Err(ModelError::InvalidClosure(_))));
        let bad_tol = ClosureSpec::new(ClosureKind::BalancedTrade).with_tolerance(0.0);
        assert!(resolve_rate(&inst, &bad_tol).is_err());
        let empty = ClosureSpec::new(ClosureKind::WelfareSweep { grid: vec![] });
        assert!(resolve_rate(&inst, &empty).is_err());
        assert!(resolve_rate(&inst, &ClosureSpec::fixed(-1.5)).is_err());
    }

    #[test]
    fn welfare_sweep_prefers_highest_utility_then_lowest_rate() {
        let inst = ModelInstance::baseline();
        let grid = vec![0.6, 0.45, 0.5, 0.55];
        let out = resolve_rate(&inst, &ClosureSpec::new(ClosureKind::WelfareSweep { grid: grid.clone() })).unwrap();
        // Welfare falls with the rate at baseline.
        assert_eq!(out.rate, 0.45);
        let mut reversed = grid;
        reversed.reverse();
        let again = resolve_rate(&inst, &ClosureSpec::new(ClosureKind::WelfareSweep { grid: reversed })).unwrap();
        assert_eq!(again.rate, out.rate);

        let dup = ClosureSpec::new(ClosureKind::WelfareSweep { grid: vec![0.5, 0.5] });
        assert_eq!(resolve_rate(&inst, &dup).unwrap().rate, 0.5);
    }

    #[test]
    fn welfare_difference_signs() {
        let inst = ModelInstance::baseline();
        let at_base = welfare_stationarity_check(&inst, 0.4821, 1e-4).unwrap();
        assert!(at_base < 0.0);

        let spec = ClosureSpec::new(ClosureKind::BalancedTrade).with_bracket(0.4821, 2.0);
        let r_star = resolve_rate(&inst, &spec).unwrap().rate;
        let u = solve_at_rate(&inst, r_star).unwrap().welfare;
        let diff = welfare_stationarity_check(&inst, r_star, 1e-4).unwrap();
        assert!(diff.abs() <= 1e-3 * u.abs());
        assert!(welfare_stationarity_check(&inst, r_star, 0.0).is_err());
    }
}
