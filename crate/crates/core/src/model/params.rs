//! Parameters and exogenous variables of a model instance.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, ModelError, Result};

/// Household preferences (period utility and discounting).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preferences {
    /// Inverse intertemporal elasticity of substitution.
    pub gamma: f64,
    /// Inverse Frisch elasticity of labor supply.
    pub theta: f64,
    /// Subjective discount rate per period.
    pub rho: f64,
    /// Weight of labor disutility. Only affects welfare levels.
    pub phi: f64,
}

impl Preferences {
    /// Discount factor `1 / (1 + rho)`.
    pub fn beta(&self) -> f64 {
        1.0 / (1.0 + self.rho)
    }

    pub fn validate(&self) -> Result<()> {
        positive("gamma", self.gamma)?;
        positive("theta", self.theta)?;
        positive("rho", self.rho)?;
        positive("phi", self.phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Technology {
    /// Output elasticity of capital.
    pub alpha: f64,
    /// Depreciation rate per period.
    pub delta: f64,
    /// Labor efficiency in the present period.
    pub a0: f64,
    /// Anticipated labor efficiency in the future period.
    pub a1: f64,
}

impl Technology {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(domain(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(domain(format!("delta must lie in (0, 1], got {}", self.delta)));
        }
        positive("A0", self.a0)?;
        positive("A1", self.a1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demography {
    pub n0: f64,
    pub n1: f64,
    /// Hours available per household in the present period.
    pub l0_max: f64,
    /// Hours available per household in the future period (all supplied).
    pub l1_max: f64,
}

impl Demography {
    pub fn validate(&self) -> Result<()> {
        positive("N0", self.n0)?;
        positive("N1", self.n1)?;
        positive("l0_max", self.l0_max)?;
        positive("l1_max", self.l1_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fiscal {
    pub g0: f64,
    pub g1: f64,
    /// Total tax revenue in the present period; future taxes balance the budget.
    pub t0: f64,
}

impl Fiscal {
    pub fn validate(&self) -> Result<()> {
        non_negative("G0", self.g0)?;
        non_negative("G1", self.g1)?;
        finite("tax0", self.t0)
    }
}

/// A complete parameterisation of the two-period economy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelInstance {
    pub preferences: Preferences,
    pub technology: Technology,
    pub demography: Demography,
    pub fiscal: Fiscal,
    /// Initial capital stock.
    pub k0: f64,
    /// Length of one model period in years.
    pub years_per_period: f64,
}

impl ModelInstance {
    /// The baseline economy behind the reference table.
    pub fn baseline() -> Self {
        ModelInstance {
            preferences: Preferences { gamma: 1.2, theta: 9.0, rho: 0.5, phi: 1.0 },
            technology: Technology { alpha: 0.5, delta: 1.0, a0: 1.0, a1: 1.0 },
            demography: Demography { n0: 10.0, n1: 10.0, l0_max: 35_000.0, l1_max: 29_440.0 },
            fiscal: Fiscal { g0: 0.0, g1: 0.0, t0: 0.0 },
            k0: 31_756.0,
            years_per_period: 16.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.preferences.validate()?;
        self.technology.validate()?;
        self.demography.validate()?;
        self.fiscal.validate()?;
        positive("K0", self.k0)?;
        positive("years_per_period", self.years_per_period)
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::Alpha => self.technology.alpha,
            Param::Delta => self.technology.delta,
            Param::A0 => self.technology.a0,
            Param::A1 => self.technology.a1,
            Param::Gamma => self.preferences.gamma,
            Param::Theta => self.preferences.theta,
            Param::Rho => self.preferences.rho,
            Param::Phi => self.preferences.phi,
            Param::N0 => self.demography.n0,
            Param::N1 => self.demography.n1,
            Param::L0Max => self.demography.l0_max,
            Param::L1Max => self.demography.l1_max,
            Param::Tax0 => self.fiscal.t0,
            Param::G0 => self.fiscal.g0,
            Param::G1 => self.fiscal.g1,
            Param::K0 => self.k0,
            Param::YearsPerPeriod => self.years_per_period,
        }
    }

    pub fn set(&mut self, param: Param, value: f64) {
        let slot = match param {
            Param::Alpha => &mut self.technology.alpha,
            Param::Delta => &mut self.technology.delta,
            Param::A0 => &mut self.technology.a0,
            Param::A1 => &mut self.technology.a1,
            Param::Gamma => &mut self.preferences.gamma,
            Param::Theta => &mut self.preferences.theta,
            Param::Rho => &mut self.preferences.rho,
            Param::Phi => &mut self.preferences.phi,
            Param::N0 => &mut self.demography.n0,
            Param::N1 => &mut self.demography.n1,
            Param::L0Max => &mut self.demography.l0_max,
            Param::L1Max => &mut self.demography.l1_max,
            Param::Tax0 => &mut self.fiscal.t0,
            Param::G0 => &mut self.fiscal.g0,
            Param::G1 => &mut self.fiscal.g1,
            Param::K0 => &mut self.k0,
            Param::YearsPerPeriod => &mut self.years_per_period,
        };
        *slot = value;
    }
}

impl Default for ModelInstance {
    fn default() -> Self {
        Self::baseline()
    }
}

/// Addressable scalar parameter of a [`ModelInstance`].
///
/// Paths are written either bare (`gamma`) or qualified by their section
/// (`preferences.gamma`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Alpha,
    Gamma,
    Delta,
    Theta,
    Rho,
    Phi,
    A0,
    A1,
    N0,
    N1,
    K0,
    Tax0,
    G0,
    G1,
    L0Max,
    L1Max,
    YearsPerPeriod,
}

impl Param {
    pub const ALL: [Param; 17] = [
        Param::Alpha,
        Param::Gamma,
        Param::Delta,
        Param::Theta,
        Param::Rho,
        Param::Phi,
        Param::A0,
        Param::A1,
        Param::N0,
        Param::N1,
        Param::K0,
        Param::Tax0,
        Param::G0,
        Param::G1,
        Param::L0Max,
        Param::L1Max,
        Param::YearsPerPeriod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Gamma => "gamma",
            Param::Delta => "delta",
            Param::Theta => "theta",
            Param::Rho => "rho",
            Param::Phi => "phi",
            Param::A0 => "A0",
            Param::A1 => "A1",
            Param::N0 => "N0",
            Param::N1 => "N1",
            Param::K0 => "K0",
            Param::Tax0 => "tax0",
            Param::G0 => "G0",
            Param::G1 => "G1",
            Param::L0Max => "l0_max",
            Param::L1Max => "l1_max",
            Param::YearsPerPeriod => "years_per_period",
        }
    }

    pub fn section(self) -> &'static str {
        match self {
            Param::Gamma | Param::Theta | Param::Rho | Param::Phi => "preferences",
            Param::Alpha | Param::Delta | Param::A0 | Param::A1 => "technology",
            Param::N0 | Param::N1 | Param::L0Max | Param::L1Max => "demography",
            Param::Tax0 | Param::G0 | Param::G1 => "fiscal",
            Param::K0 | Param::YearsPerPeriod => "economy",
        }
    }

    /// Fully qualified `section.name` path.
    pub fn path(self) -> String {
        format!("{}.{}", self.section(), self.name())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (section, name) = match s.split_once('.') {
            Some((sec, name)) => (Some(sec), name),
            None => (None, s),
        };
        Param::ALL
            .iter()
            .copied()
            .find(|p| p.name() == name && section.is_none_or(|sec| sec == p.section()))
            .ok_or_else(|| ModelError::UnknownParameter(s.to_string()))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must be non-negative, got {v}")))
    }
}
