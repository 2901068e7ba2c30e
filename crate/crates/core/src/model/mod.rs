//! The two-period equilibrium system evaluated at a given control rate.

mod equilibrium;
mod ops;
mod params;

pub use equilibrium::{saving_decomposition, solve_at_rate, welfare, Equilibrium, PeriodValues};
pub use ops::{
    annualize_rate, capital_demand, check_gross_rate, check_rate, dividends, euler_growth,
    future_wage, government_t1, labor_supply_present, lifetime_utility, output, period_utility,
    q_factor, wage_mpl, LaborSupply, MIN_USER_COST,
};
pub use params::{Demography, Fiscal, ModelInstance, Param, Preferences, Technology};
