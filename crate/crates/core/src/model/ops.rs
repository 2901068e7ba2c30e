//! Closed-form building blocks of the equilibrium system.
//!
//! Every function here is pure. Rates are per model period.

use crate::error::{domain, Result};

use super::params::{Fiscal, ModelInstance, Preferences, Technology};

/// Smallest admissible user cost of capital `delta + r`.
pub const MIN_USER_COST: f64 = 1e-9;

/// Checks `r > -1`.
pub fn check_gross_rate(r: f64) -> Result<()> {
    if r.is_finite() && r > -1.0 {
        Ok(())
    } else {
        Err(domain(format!("interest rate must exceed -1, got {r}")))
    }
}

/// Checks `r > -1` and `delta + r > MIN_USER_COST`.
pub fn check_rate(delta: f64, r: f64) -> Result<()> {
    check_gross_rate(r)?;
    if delta + r > MIN_USER_COST {
        Ok(())
    } else {
        Err(domain(format!("user cost delta + r must be positive, got {delta} + {r}")))
    }
}

/// Profit-maximising future capital stock, `A1 L1 (alpha / (delta + r))^(1 / (1 - alpha))`.
pub fn capital_demand(tech: &Technology, l1_total: f64, r: f64) -> Result<f64> {
    check_rate(tech.delta, r)?;
    if !(l1_total > 0.0) {
        return Err(domain(format!("future labor input must be positive, got {l1_total}")));
    }
    let ratio = tech.alpha / (tech.delta + r);
    Ok(tech.a1 * l1_total * ratio.powf(1.0 / (1.0 - tech.alpha)))
}

/// Cobb-Douglas output `K^alpha (A L)^(1 - alpha)`.
pub fn output(capital: f64, efficiency: f64, labor: f64, alpha: f64) -> Result<f64> {
    if !(capital > 0.0 && efficiency > 0.0 && labor > 0.0) {
        return Err(domain(format!(
            "production inputs must be positive (K = {capital}, A = {efficiency}, L = {labor})"
        )));
    }
    Ok(capital.powf(alpha) * (efficiency * labor).powf(1.0 - alpha))
}

/// Marginal product of labor `(1 - alpha) Y / L`.
pub fn wage_mpl(output: f64, labor: f64, alpha: f64) -> Result<f64> {
    if !(labor > 0.0) {
        return Err(domain(format!("labor input must be positive, got {labor}")));
    }
    Ok((1.0 - alpha) * output / labor)
}

/// Future wage once capital is at its demand level. Independent of `L1`.
pub fn future_wage(tech: &Technology, r: f64) -> Result<f64> {
    check_rate(tech.delta, r)?;
    let alpha = tech.alpha;
    let ratio = alpha / (tech.delta + r);
    Ok((1.0 - alpha) * tech.a1 * ratio.powf(alpha / (1.0 - alpha)))
}

/// Present hours per household and whether the time endowment binds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaborSupply {
    pub hours: f64,
    pub binding: bool,
}

/// Solves the present labor-supply condition jointly with the present wage.
///
/// The intertemporal labor condition `l0 = [beta w0 (1 + r) / w1]^(1/theta) l1`
/// depends on `l0` through `w0 = (1 - alpha) K0^alpha A0^(1-alpha) (N0 l0)^(-alpha)`,
/// which gives the closed form
/// `l0 = [beta (1 + r) (1 - alpha) K0^alpha A0^(1-alpha) N0^(-alpha) l1^theta / w1]^(1 / (theta + alpha))`.
/// The result is clamped to `l0_max`.
pub fn labor_supply_present(inst: &ModelInstance, r: f64, w1: f64) -> Result<LaborSupply> {
    check_gross_rate(r)?;
    if !(w1 > 0.0) {
        return Err(domain(format!("future wage must be positive, got {w1}")));
    }
    let prefs = &inst.preferences;
    let tech = &inst.technology;
    let demo = &inst.demography;
    let alpha = tech.alpha;
    let theta = prefs.theta;

    // Work in logs: l1^theta overflows quickly for large endowments.
    let log_arg = prefs.beta().ln() + (1.0 + r).ln() + (1.0 - alpha).ln()
        + alpha * inst.k0.ln()
        + (1.0 - alpha) * tech.a0.ln()
        - alpha * demo.n0.ln()
        + theta * demo.l1_max.ln()
        - w1.ln();
    let interior = (log_arg / (theta + alpha)).exp();

    if interior > demo.l0_max {
        Ok(LaborSupply { hours: demo.l0_max, binding: true })
    } else {
        Ok(LaborSupply { hours: interior, binding: false })
    }
}

/// Gross consumption growth `c1 / c0 = [beta (1 + r)]^(1 / gamma)`.
pub fn euler_growth(prefs: &Preferences, r: f64) -> Result<f64> {
    check_gross_rate(r)?;
    Ok((prefs.beta() * (1.0 + r)).powf(1.0 / prefs.gamma))
}

/// Consumption-function denominator `1 + [beta (1 + r)]^(1/gamma) / (1 + r)`.
pub fn q_factor(prefs: &Preferences, r: f64) -> Result<f64> {
    Ok(1.0 + euler_growth(prefs, r)? / (1.0 + r))
}

/// Future tax revenue that closes the government's present-value budget.
pub fn government_t1(fiscal: &Fiscal, r: f64) -> Result<f64> {
    check_gross_rate(r)?;
    Ok((1.0 + r) * fiscal.g0 + fiscal.g1 - fiscal.t0 * (1.0 + r))
}

/// Dividend per household: profit net of retained investment.
pub fn dividends(output: f64, wage: f64, labor: f64, investment: f64, households: f64) -> Result<f64> {
    if !(households > 0.0) {
        return Err(domain(format!("household count must be positive, got {households}")));
    }
    Ok((output - wage * labor - investment) / households)
}

/// Converts a per-period rate into the equivalent compound rate per year.
pub fn annualize_rate(per_period: f64, years: f64) -> Result<f64> {
    check_gross_rate(per_period)?;
    if !(years > 0.0 && years.is_finite()) {
        return Err(domain(format!("years per period must be positive, got {years}")));
    }
    Ok((1.0 + per_period).powf(1.0 / years) - 1.0)
}

/// Period utility `c^(1-gamma)/(1-gamma) - phi l^(1+theta)/(1+theta)`, with
/// `ln c` in place of the consumption term when `gamma == 1`.
pub fn period_utility(prefs: &Preferences, consumption: f64, hours: f64) -> Result<f64> {
    if !(consumption > 0.0) {
        return Err(domain(format!("consumption must be positive, got {consumption}")));
    }
    if !(hours >= 0.0) {
        return Err(domain(format!("hours must be non-negative, got {hours}")));
    }
    let gamma = prefs.gamma;
    let consumption_term = if gamma == 1.0 {
        consumption.ln()
    } else {
        consumption.powf(1.0 - gamma) / (1.0 - gamma)
    };
    let theta = prefs.theta;
    Ok(consumption_term - prefs.phi * hours.powf(1.0 + theta) / (1.0 + theta))
}

/// Lifetime utility `u(c0, l0) + beta u(c1, l1)`.
pub fn lifetime_utility(prefs: &Preferences, c0: f64, l0: f64, c1: f64, l1: f64) -> Result<f64> {
    Ok(period_utility(prefs, c0, l0)? + prefs.beta() * period_utility(prefs, c1, l1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::ModelInstance;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn baseline_tech() -> Technology {
        ModelInstance::baseline().technology
    }

    #[test]
    fn capital_demand_examples() {
        let k1 = capital_demand(&baseline_tech(), 294_400.0, 0.4821).unwrap();
        assert!(rel(k1, 33_504.96) < 2e-3, "{k1}");

        let unit = Technology { alpha: 0.5, delta: 0.5, a0: 1.0, a1: 1.0 };
        assert_eq!(capital_demand(&unit, 1234.5, 0.0).unwrap(), 1234.5);

        let k1 = capital_demand(&baseline_tech(), 294_400.0, 0.5560).unwrap();
        assert!(rel(k1, 30_397.05) < 2e-3, "{k1}");
    }

    #[test]
    fn capital_demand_rejects_nonpositive_user_cost() {
        let tech = Technology { alpha: 0.5, delta: 0.5, a0: 1.0, a1: 1.0 };
        assert!(capital_demand(&tech, 1.0, -0.5).is_err());
        assert!(capital_demand(&tech, 1.0, -0.7).is_err());
        assert!(capital_demand(&tech, 0.0, 0.1).is_err());
    }

    #[test]
    fn output_examples() {
        let y1 = output(33_504.96, 1.0, 294_400.0, 0.5).unwrap();
        assert!(rel(y1, 99_316.97) < 2e-3);
        for alpha in [0.1, 0.5, 0.9] {
            assert!((output(1.0, 1.0, 1.0, alpha).unwrap() - 1.0).abs() < 1e-15);
        }
        // hand oracle: square root of K L
        let y0 = output(31_756.0, 1.0, 293_200.0, 0.5).unwrap();
        assert!(rel(y0, (31_756.0_f64 * 293_200.0).sqrt()) < 1e-14);
        assert!(rel(y0, 96_492.0) < 2e-3);
        assert!(output(0.0, 1.0, 1.0, 0.5).is_err());
        assert!(output(1.0, -1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn output_is_homogeneous_of_degree_one() {
        let base = output(3.0, 2.0, 5.0, 0.37).unwrap();
        let scaled = output(3.0 * 4.0, 2.0, 5.0 * 4.0, 0.37).unwrap();
        assert!(rel(scaled, 4.0 * base) < 1e-14);
    }

    #[test]
    fn wage_examples() {
        assert!(rel(wage_mpl(96_492.12, 293_200.0, 0.5).unwrap(), 0.1646) < 1e-3);
        assert_eq!(wage_mpl(1.0, 1.0, 0.5).unwrap(), 0.5);
        assert!(rel(wage_mpl(99_316.97, 294_400.0, 0.5).unwrap(), 0.1687) < 1e-3);
        assert!(wage_mpl(1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn future_wage_matches_composed_pipeline() {
        let tech = baseline_tech();
        let w1 = future_wage(&tech, 0.4821).unwrap();
        for l1 in [1.0, 294_400.0, 7.5e6] {
            let k1 = capital_demand(&tech, l1, 0.4821).unwrap();
            let y1 = output(k1, tech.a1, l1, tech.alpha).unwrap();
            let composed = wage_mpl(y1, l1, tech.alpha).unwrap();
            assert!(rel(w1, composed) < 1e-12);
        }
        assert!((w1 - 0.168680).abs() < 1e-4);

        let unit = Technology { alpha: 0.5, delta: 0.5, a0: 1.0, a1: 1.0 };
        assert_eq!(future_wage(&unit, 0.0).unwrap(), 0.5);

        let esc_v = Technology { a1: 1.15, ..tech };
        assert!(rel(future_wage(&esc_v, 0.4979).unwrap(), 0.1919) < 1e-3);
    }

    #[test]
    fn labor_supply_examples() {
        let inst = ModelInstance::baseline();
        let w1 = future_wage(&inst.technology, 0.4821).unwrap();
        let ls = labor_supply_present(&inst, 0.4821, w1).unwrap();
        assert!(rel(ls.hours, 29_320.0) < 1e-3);
        assert!(!ls.binding);

        let mut tight = inst;
        tight.demography.l0_max = 20_000.0;
        let ls = labor_supply_present(&tight, 0.4821, w1).unwrap();
        assert_eq!(ls.hours, 20_000.0);
        assert!(ls.binding);

        assert!(labor_supply_present(&inst, -1.0, w1).is_err());
        assert!(labor_supply_present(&inst, 0.4, 0.0).is_err());
    }

    #[test]
    fn labor_supply_symmetric_case() {
        // Choose K0 so that beta w0(l1) (1 + r) / w1 = 1 at l0 = l1.
        let mut inst = ModelInstance::baseline();
        let r = 0.3;
        let w1 = 0.2;
        let beta = inst.preferences.beta();
        let l1 = inst.demography.l1_max;
        let target_w0 = w1 / (beta * (1.0 + r));
        // w0 = 0.5 * sqrt(K0 / (N0 l1)) for alpha = 0.5, A0 = 1
        inst.k0 = (target_w0 / 0.5).powi(2) * inst.demography.n0 * l1;
        let ls = labor_supply_present(&inst, r, w1).unwrap();
        assert!(rel(ls.hours, l1) < 1e-12);
        assert!(!ls.binding);
    }

    #[test]
    fn euler_and_q_examples() {
        let prefs = ModelInstance::baseline().preferences;
        let g = euler_growth(&prefs, 0.4821).unwrap();
        assert!((g - 77_161.10 / 77_935.89).abs() < 1e-4);
        assert!((g - 0.99005).abs() < 1e-4);
        assert!((euler_growth(&Preferences { gamma: 3.7, ..prefs }, prefs.rho).unwrap() - 1.0).abs() < 1e-15);

        let esc_v = Preferences { gamma: 1.2, ..prefs };
        assert!((euler_growth(&esc_v, 0.4979).unwrap() - 0.99883).abs() < 1e-4);

        assert!((q_factor(&prefs, 0.4821).unwrap() - 1.66799).abs() < 1e-4);
        // beta (1 + r) = 1 with r = 0 requires beta = 1; check the limit directly.
        let near_one = Preferences { rho: 1e-15, ..prefs };
        assert!((q_factor(&near_one, 0.0).unwrap() - 2.0).abs() < 1e-12);
        let esc_iv = Preferences { rho: 0.575, ..prefs };
        assert!((q_factor(&esc_iv, 0.5560).unwrap() - 1.63621).abs() < 1e-4);
        assert!(euler_growth(&prefs, -1.5).is_err());
    }

    #[test]
    fn government_budget_examples() {
        let zero = Fiscal { g0: 0.0, g1: 0.0, t0: 0.0 };
        assert_eq!(government_t1(&zero, 0.37).unwrap(), 0.0);
        let balanced = Fiscal { g0: 10.0, g1: 0.0, t0: 10.0 };
        assert_eq!(government_t1(&balanced, 0.81).unwrap(), 0.0);
        let future = Fiscal { g0: 0.0, g1: 5.0, t0: 0.0 };
        assert_eq!(government_t1(&future, 0.5).unwrap(), 5.0);

        let f = Fiscal { g0: 3.0, g1: 7.0, t0: 1.5 };
        let r = 0.42;
        let t1 = government_t1(&f, r).unwrap();
        let pv_tax = f.t0 + t1 / (1.0 + r);
        let pv_spend = f.g0 + f.g1 / (1.0 + r);
        assert!((pv_tax - pv_spend).abs() < 1e-12);
    }

    #[test]
    fn dividend_examples() {
        let y0 = 96_492.12;
        let x0 = dividends(y0, 0.5 * y0 / 293_200.0, 293_200.0, 33_504.96, 10.0).unwrap();
        assert!(rel(x0, 1_474.1) < 5e-3, "{x0}");
        assert_eq!(dividends(8.0, 2.0, 4.0, 0.0, 3.0).unwrap(), 0.0);
        let y1 = 99_316.97;
        let x1 = dividends(y1, 0.5 * y1 / 294_400.0, 294_400.0, 0.0, 10.0).unwrap();
        assert!(rel(x1, 4_965.85) < 5e-3);
        assert!(rel(x1, 1.4821 * 33_504.96 / 10.0) < 5e-3);
        assert!(dividends(1.0, 1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn annualize_examples() {
        assert!((annualize_rate(0.4821, 16.0).unwrap() - 0.0249).abs() < 5e-4);
        assert_eq!(annualize_rate(0.0, 16.0).unwrap(), 0.0);
        assert_eq!(annualize_rate(0.0, 3.0).unwrap(), 0.0);
        let rho_year = annualize_rate(0.5, 16.0).unwrap();
        assert!((rho_year - 0.02566).abs() < 1e-5);
        assert_eq!(format!("{rho_year:.3}"), "0.026");
        assert!(annualize_rate(-1.0, 16.0).is_err());
        assert!(annualize_rate(0.1, 0.0).is_err());
    }

    #[test]
    fn utility_examples() {
        let prefs = Preferences { gamma: 2.0, theta: 1.0, rho: 1.0, phi: 1.0 };
        assert_eq!(lifetime_utility(&prefs, 1.0, 0.0, 1.0, 0.0).unwrap(), -1.5);

        let log_prefs = Preferences { gamma: 1.0, ..prefs };
        let c = 3.7;
        let at_one = period_utility(&log_prefs, c, 0.0).unwrap();
        assert_eq!(at_one, c.ln());
        // c^(1-g)/(1-g) = ln c + 1/(1-g) + O(1-g); compare after removing the constant
        for eps in [1e-6, -1e-6] {
            let p = Preferences { gamma: 1.0 + eps, ..prefs };
            let u = period_utility(&p, c, 0.0).unwrap() + 1.0 / eps;
            assert!((u - at_one).abs() < 1e-4, "{u} vs {at_one}");
        }
        assert!(period_utility(&prefs, 0.0, 1.0).is_err());
    }
}
