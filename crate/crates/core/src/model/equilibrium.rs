use crate::error::{ModelError, Result};

use super::ops::{
    capital_demand, check_rate, dividends, euler_growth, future_wage, government_t1,
    labor_supply_present, lifetime_utility, output, q_factor, wage_mpl,
};
use super::params::{ModelInstance, Preferences};

/// Endogenous values of one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodValues {
    pub output: f64,
    /// Capital in place during the period.
    pub capital: f64,
    /// Aggregate hours `N l`.
    pub labor: f64,
    /// Hours per household.
    pub hours: f64,
    pub wage: f64,
    /// Consumption per household.
    pub consumption: f64,
    /// Aggregate consumption `N c`.
    pub consumption_total: f64,
    /// Dividend per household.
    pub dividend: f64,
    /// Tax per household.
    pub tax: f64,
    pub tax_total: f64,
    /// Net exports `X - M`.
    pub trade_balance: f64,
}

/// Full endogenous vector of the economy at a given control rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub rate: f64,
    pub present: PeriodValues,
    pub future: PeriodValues,
    /// Gross investment in the present period.
    pub investment: f64,
    /// Consumption-function denominator.
    pub q: f64,
    /// Present-value income per household.
    pub pv_income: f64,
    /// Present national saving `Y0 - C0 - G0`.
    pub national_saving: f64,
    /// External saving `(X1 - M1) / (1 + r)`.
    pub external_saving: f64,
    /// Lifetime utility of the representative household.
    pub welfare: f64,
    /// True when present hours are clamped at the time endowment.
    pub l0_binding: bool,
    /// `tb0 + tb1 / (1 + r)`; zero up to rounding when `N0 == N1`.
    pub walras_residual: f64,
}

impl Equilibrium {
    pub fn saving_identity_residual(&self) -> f64 {
        self.national_saving + self.external_saving - self.investment
    }
}

/// Evaluates the whole equilibrium system at the control rate `r`.
pub fn solve_at_rate(inst: &ModelInstance, r: f64) -> Result<Equilibrium> {
    inst.validate()?;
    let tech = &inst.technology;
    let demo = &inst.demography;
    let prefs = &inst.preferences;
    let fiscal = &inst.fiscal;
    check_rate(tech.delta, r)?;
    let alpha = tech.alpha;
    let discount = 1.0 / (1.0 + r);

    // Future period: labor fixed at the endowment, capital at its demand level.
    let l1 = demo.l1_max;
    let labor1 = demo.n1 * l1;
    let w1 = future_wage(tech, r)?;
    let k1 = capital_demand(tech, labor1, r)?;
    let y1 = output(k1, tech.a1, labor1, alpha)?;

    // Present period.
    let supply = labor_supply_present(inst, r, w1)?;
    let l0 = supply.hours;
    let labor0 = demo.n0 * l0;
    let y0 = output(inst.k0, tech.a0, labor0, alpha)?;
    let w0 = wage_mpl(y0, labor0, alpha)?;
    let investment = k1 - (1.0 - tech.delta) * inst.k0;

    let x0 = dividends(y0, w0, labor0, investment, demo.n0)?;
    let x1 = dividends(y1, w1, labor1, 0.0, demo.n1)?;

    let t0_total = fiscal.t0;
    let t1_total = government_t1(fiscal, r)?;
    let tax0 = t0_total / demo.n0;
    let tax1 = t1_total / demo.n1;

    let pv_income = w0 * l0 + w1 * l1 * discount + x0 + x1 * discount - tax0 - tax1 * discount;
    if !(pv_income > 0.0) {
        return Err(ModelError::Infeasible(format!(
            "present-value household income is {pv_income} at r = {r}"
        )));
    }
    let q = q_factor(prefs, r)?;
    let c0 = pv_income / q;
    let c1 = euler_growth(prefs, r)? * c0;
    let c0_total = demo.n0 * c0;
    let c1_total = demo.n1 * c1;

    let tb0 = y0 - c0_total - investment - fiscal.g0;
    let tb1 = y1 - c1_total - fiscal.g1;

    let welfare = lifetime_utility(prefs, c0, l0, c1, l1)?;

    Ok(Equilibrium {
        rate: r,
        present: PeriodValues {
            output: y0,
            capital: inst.k0,
            labor: labor0,
            hours: l0,
            wage: w0,
            consumption: c0,
            consumption_total: c0_total,
            dividend: x0,
            tax: tax0,
            tax_total: t0_total,
            trade_balance: tb0,
        },
        future: PeriodValues {
            output: y1,
            capital: k1,
            labor: labor1,
            hours: l1,
            wage: w1,
            consumption: c1,
            consumption_total: c1_total,
            dividend: x1,
            tax: tax1,
            tax_total: t1_total,
            trade_balance: tb1,
        },
        investment,
        q,
        pv_income,
        national_saving: y0 - c0_total - fiscal.g0,
        external_saving: tb1 / (1.0 + r),
        welfare,
        l0_binding: supply.binding,
        walras_residual: tb0 + tb1 * discount,
    })
}

/// Present national saving and external saving, `(S0N, S1X)`.
pub fn saving_decomposition(eq: &Equilibrium, g0: f64) -> (f64, f64) {
    let s0n = eq.present.output - eq.present.consumption_total - g0;
    let s1x = eq.future.trade_balance / (1.0 + eq.rate);
    (s0n, s1x)
}

/// Lifetime utility of an equilibrium allocation under `prefs`.
pub fn welfare(eq: &Equilibrium, prefs: &Preferences) -> Result<f64> {
    lifetime_utility(
        prefs,
        eq.present.consumption,
        eq.present.hours,
        eq.future.consumption,
        eq.future.hours,
    )
}
