//! Two-period open-economy general equilibrium in which the real interest
//! rate is a control variable rather than a market-clearing price.
//!
//! [`model::solve_at_rate`] evaluates the whole system at a chosen rate,
//! [`closure`] offers rules for picking that rate, [`statics`] runs
//! comparative-statics scenarios against the bundled reference table and
//! [`schedules`] traces saving and investment curves over a rate grid.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod closure;
pub mod config;
pub mod error;
pub mod model;
pub mod reference;
pub mod report;
pub mod schedules;
pub mod statics;
pub mod verify;

pub use error::{ModelError, Result};
pub use model::{solve_at_rate, Equilibrium, ModelInstance};
