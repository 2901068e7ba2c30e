//! Comparative-statics scenarios and comparison against reference values.

use crate::closure::{resolve_rate, ClosureReport, ClosureSpec};
use crate::error::{ModelError, Result};
use crate::model::{annualize_rate, solve_at_rate, Equilibrium, ModelInstance, Param};
use crate::reference::{self, ResultRow, RowValues, PERTURBATION_FACTOR};

pub const DEFAULT_TOLERANCE: f64 = 2e-3;

/// Expected table values for a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    /// Expected value per row; rows left as `None` are not compared.
    pub values: [Option<f64>; 16],
    pub tolerance: f64,
}

impl ReferenceRow {
    pub fn empty(tolerance: f64) -> Self {
        ReferenceRow { values: [None; 16], tolerance }
    }

    pub fn from_values(values: &RowValues, tolerance: f64) -> Self {
        ReferenceRow { values: values.0.map(Some), tolerance }
    }

    pub fn get(&self, row: ResultRow) -> Option<f64> {
        self.values[row.index()]
    }

    pub fn set(&mut self, row: ResultRow, value: f64) {
        self.values[row.index()] = Some(value);
    }
}

/// A named variation of a base instance solved at a chosen rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Absolute values replacing base parameters.
    pub overrides: Vec<(Param, f64)>,
    /// Multiplicative factors applied to base parameters.
    pub perturbations: Vec<(Param, f64)>,
    /// How the control rate is chosen; usually a fixed published rate.
    pub rate: ClosureSpec,
    pub reference: Option<ReferenceRow>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, rate: f64) -> Self {
        Scenario {
            name: name.into(),
            overrides: Vec::new(),
            perturbations: Vec::new(),
            rate: ClosureSpec::fixed(rate),
            reference: None,
        }
    }

    pub fn perturb(mut self, param: Param, factor: f64) -> Self {
        self.perturbations.push((param, factor));
        self
    }

    pub fn set(mut self, param: Param, value: f64) -> Self {
        self.overrides.push((param, value));
        self
    }

    pub fn with_reference(mut self, reference: ReferenceRow) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen: Vec<Param> = Vec::new();
        for &(p, v) in self.overrides.iter().chain(&self.perturbations) {
            if seen.contains(&p) {
                return Err(ModelError::InvalidScenario(format!(
                    "scenario `{}` changes `{p}` more than once",
                    self.name
                )));
            }
            if !v.is_finite() {
                return Err(ModelError::InvalidScenario(format!(
                    "scenario `{}` has non-finite value for `{p}`",
                    self.name
                )));
            }
            seen.push(p);
        }
        Ok(())
    }

    /// True when the scenario leaves the base instance untouched.
    pub fn is_base(&self) -> bool {
        self.overrides.is_empty() && self.perturbations.is_empty()
    }
}

/// Builds the instance a scenario describes. `base` is not modified.
pub fn apply_scenario(base: &ModelInstance, s: &Scenario) -> Result<ModelInstance> {
    s.validate()?;
    let mut inst = *base;
    for &(p, value) in &s.overrides {
        inst.set(p, value);
    }
    for &(p, factor) in &s.perturbations {
        inst.set(p, base.get(p) * factor);
    }
    inst.validate()?;
    Ok(inst)
}

/// Level and ratio rows of the table computed from an equilibrium.
pub fn report_row(eq: &Equilibrium, inst: &ModelInstance) -> Result<RowValues> {
    let r = eq.rate;
    let y0 = eq.present.output;
    let w0 = eq.present.wage;
    let w1 = eq.future.wage;
    let mut v = RowValues([0.0; 16]);
    v.set(ResultRow::TradeBalance0, eq.present.trade_balance);
    v.set(ResultRow::Rate, r);
    v.set(ResultRow::RatePerYear, annualize_rate(r, inst.years_per_period)?);
    v.set(ResultRow::Investment0, eq.investment);
    v.set(ResultRow::Output1, eq.future.output);
    v.set(ResultRow::Output0, y0);
    v.set(ResultRow::Hours0, eq.present.hours);
    v.set(ResultRow::Consumption0, eq.present.consumption_total);
    v.set(ResultRow::Consumption1, eq.future.consumption_total);
    v.set(ResultRow::InvestmentShare, eq.investment / y0);
    v.set(ResultRow::ConsumptionShare, eq.present.consumption_total / y0);
    v.set(ResultRow::RelativeWage, w0 / (w1 / (1.0 + r)));
    v.set(ResultRow::TradeShare, eq.present.trade_balance / y0);
    v.set(ResultRow::Wage0, w0);
    v.set(ResultRow::WageOverRate, w0 / r);
    v.set(ResultRow::Wage1, w1);
    Ok(v)
}

/// Deviation used for pass/fail: absolute when the expected value is below
/// one in magnitude, relative otherwise.
pub fn deviation(solved: f64, expected: f64) -> f64 {
    let diff = (solved - expected).abs();
    if expected.abs() < 1.0 {
        diff
    } else {
        diff / expected.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellComparison {
    pub row: ResultRow,
    pub solved: f64,
    pub expected: f64,
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSolution {
    pub instance: ModelInstance,
    pub closure: ClosureReport,
    pub equilibrium: Equilibrium,
    pub rows: RowValues,
    pub comparisons: Vec<CellComparison>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub name: String,
    pub result: std::result::Result<ScenarioSolution, ModelError>,
}

impl ScenarioOutcome {
    pub fn passed(&self) -> bool {
        match &self.result {
            Ok(sol) => sol.comparisons.iter().all(|c| c.pass),
            Err(_) => false,
        }
    }
}

/// Expected direction of a variable between a perturbed scenario and base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
    Unchanged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignCheck {
    pub scenario: String,
    pub parameter: Param,
    pub quantity: &'static str,
    pub expected: Direction,
    pub base: f64,
    pub perturbed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub outcomes: Vec<ScenarioOutcome>,
    pub sign_checks: Vec<SignCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(ScenarioOutcome::passed) && self.sign_checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for o in &self.outcomes {
            match &o.result {
                Err(e) => out.push(format!("{}: {e}", o.name)),
                Ok(sol) => {
                    for c in sol.comparisons.iter().filter(|c| !c.pass) {
                        out.push(format!(
                            "{}: {} solved {} expected {} deviation {:.3e}",
                            o.name, c.row, c.solved, c.expected, c.deviation
                        ));
                    }
                }
            }
        }
        for s in self.sign_checks.iter().filter(|s| !s.pass) {
            out.push(format!(
                "{}: {} expected {:?} ({} -> {})",
                s.scenario, s.quantity, s.expected, s.base, s.perturbed
            ));
        }
        out
    }
}

fn solve_scenario(base: &ModelInstance, s: &Scenario) -> Result<ScenarioSolution> {
    let instance = apply_scenario(base, s)?;
    let closure = resolve_rate(&instance, &s.rate)?;
    let equilibrium = solve_at_rate(&instance, closure.rate)?;
    let rows = report_row(&equilibrium, &instance)?;
    let comparisons = match &s.reference {
        None => Vec::new(),
        Some(reference) => ResultRow::ALL
            .iter()
            .filter_map(|&row| {
                let expected = reference.get(row)?;
                let solved = rows.get(row);
                let dev = deviation(solved, expected);
                Some(CellComparison { row, solved, expected, deviation: dev, pass: dev <= reference.tolerance })
            })
            .collect(),
    };
    Ok(ScenarioSolution { instance, closure, equilibrium, rows, comparisons })
}

/// Solves every scenario and compares against its reference row. Failures
/// are collected per scenario; the suite never aborts early.
pub fn run_suite(base: &ModelInstance, scenarios: &[Scenario]) -> SuiteReport {
    let outcomes: Vec<ScenarioOutcome> = scenarios
        .iter()
        .map(|s| ScenarioOutcome { name: s.name.clone(), result: solve_scenario(base, s) })
        .collect();
    let sign_checks = directional_checks(scenarios, &outcomes);
    SuiteReport { outcomes, sign_checks }
}

/// Expected responses to raising one of `gamma`, `theta`, `rho`, `A1`.
fn expected_directions(param: Param) -> &'static [(&'static str, Direction)] {
    use Direction::*;
    match param {
        Param::Gamma => &[("r", Unchanged), ("I0", Unchanged), ("|tb0|/Y0 shift < 0.5%", Unchanged)],
        Param::Theta => &[("r", Up), ("w0", Down), ("Y0", Up), ("l0", Up)],
        Param::Rho => &[
            ("r", Up),
            ("l0", Up),
            ("Y0", Up),
            ("I0", Down),
            ("C0", Down),
            ("w0", Down),
            ("|tb0|", Down),
        ],
        Param::A1 => &[
            ("r", Up),
            ("I0", Up),
            ("C0", Up),
            ("w0", Up),
            ("w1", Up),
            ("l0", Down),
            ("Y0", Down),
            ("|tb0|", Up),
        ],
        _ => &[],
    }
}

fn quantity(eq: &Equilibrium, name: &str) -> f64 {
    match name {
        "r" => eq.rate,
        "I0" => eq.investment,
        "C0" => eq.present.consumption_total,
        "w0" => eq.present.wage,
        "w1" => eq.future.wage,
        "l0" => eq.present.hours,
        "Y0" => eq.present.output,
        "|tb0|" => eq.present.trade_balance.abs(),
        _ => eq.present.trade_balance,
    }
}

/// Directional checks for every scenario that raises exactly one of the
/// studied parameters, measured against the first unperturbed scenario.
fn directional_checks(scenarios: &[Scenario], outcomes: &[ScenarioOutcome]) -> Vec<SignCheck> {
    let Some(base_idx) = scenarios.iter().position(Scenario::is_base) else {
        return Vec::new();
    };
    let Ok(base) = &outcomes[base_idx].result else {
        return Vec::new();
    };
    let base_eq = &base.equilibrium;

    let mut checks = Vec::new();
    for (s, outcome) in scenarios.iter().zip(outcomes) {
        if !s.overrides.is_empty() || s.perturbations.len() != 1 {
            continue;
        }
        let (param, factor) = s.perturbations[0];
        if factor <= 1.0 {
            continue;
        }
        let Ok(sol) = &outcome.result else { continue };
        let eq = &sol.equilibrium;
        for &(name, expected) in expected_directions(param) {
            let (b, p, pass) = if name.starts_with("|tb0|/Y0") {
                let shift = (eq.present.trade_balance - base_eq.present.trade_balance).abs();
                let b = base_eq.present.output;
                (b, shift, shift < 0.005 * b)
            } else {
                let b = quantity(base_eq, name);
                let p = quantity(eq, name);
                let pass = match expected {
                    Direction::Up => p > b,
                    Direction::Down => p < b,
                    Direction::Unchanged => p == b,
                };
                (b, p, pass)
            };
            checks.push(SignCheck {
                scenario: s.name.clone(),
                parameter: param,
                quantity: name,
                expected,
                base: b,
                perturbed: p,
                pass,
            });
        }
    }
    checks
}

/// The five published scenarios with their rates and reference columns.
pub fn reference_suite() -> Vec<Scenario> {
    reference::TABLE
        .iter()
        .map(|col| {
            let rate = col.values.get(ResultRow::Rate);
            let s = Scenario::new(col.name, rate)
                .with_reference(ReferenceRow::from_values(&col.values, DEFAULT_TOLERANCE));
            match col.perturbed {
                Some(p) => s.perturb(p, PERTURBATION_FACTOR),
                None => s,
            }
        })
        .collect()
}
