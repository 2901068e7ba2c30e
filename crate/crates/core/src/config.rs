//! Plain-text instance and scenario files.
//!
//! Instance files hold one `section.key = value` pair per line, for example
//! `preferences.gamma = 1.2`. Bare keys (`gamma = 1.2`) are accepted too.
//! Keys that are absent keep their baseline value. `#` starts a comment.
//!
//! Scenario files group settings under `[name]` headers:
//!
//! ```text
//! [esc_iv]
//! perturb.rho = 1.15
//! rate = 0.5560
//! reference = esc_iv
//! ```
//!
//! Recognised keys inside a scenario: `rate`, `perturb.<param>`,
//! `set.<param>`, `reference = <table column>`, `expect.<row> = value`,
//! `tolerance`, and the closure keys `closure.kind`, `closure.target`,
//! `closure.bracket = lo,hi`, `closure.tolerance`,
//! `closure.max_iterations` and `closure.grid = r1,r2,...`.

use std::str::FromStr;

use crate::closure::{ClosureKind, ClosureSpec};
use crate::error::{ModelError, Result};
use crate::model::{ModelInstance, Param};
use crate::reference::{self, ResultRow};
use crate::statics::{ReferenceRow, Scenario, DEFAULT_TOLERANCE};

/// The five reference scenarios in scenario-file form.
pub const REFERENCE_SUITE: &str = include_str!("../data/reference_suite.scn");

fn parse_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse { line, message: message.into() }
}

/// Yields `(line_number, key, value)` for every non-blank, non-comment line,
/// or `(line_number, header, "")` for `[header]` lines.
fn entries(text: &str) -> impl Iterator<Item = Result<(usize, Line<'_>)>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        if let Some(rest) = line.strip_prefix('[') {
            return Some(match rest.strip_suffix(']') {
                Some(name) if !name.trim().is_empty() => Ok((n, Line::Header(name.trim()))),
                _ => Err(parse_err(n, format!("malformed header `{line}`"))),
            });
        }
        Some(match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => Ok((n, Line::Pair(k.trim(), v.trim()))),
            _ => Err(parse_err(n, format!("expected `key = value`, got `{line}`"))),
        })
    })
}

enum Line<'a> {
    Header(&'a str),
    Pair(&'a str, &'a str),
}

fn number(line: usize, s: &str) -> Result<f64> {
    let v = f64::from_str(s).map_err(|_| parse_err(line, format!("`{s}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("`{s}` is not finite")))
    }
}

fn number_list(line: usize, s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| number(line, t.trim())).collect()
}

fn param(line: usize, s: &str) -> Result<Param> {
    s.parse::<Param>().map_err(|e| parse_err(line, e.to_string()))
}

/// Parses an instance file on top of the baseline values.
pub fn parse_instance(text: &str) -> Result<ModelInstance> {
    let mut inst = ModelInstance::baseline();
    for entry in entries(text) {
        let (n, line) = entry?;
        match line {
            Line::Header(h) => return Err(parse_err(n, format!("unexpected header `[{h}]` in instance file"))),
            Line::Pair(k, v) => inst.set(param(n, k)?, number(n, v)?),
        }
    }
    inst.validate()?;
    Ok(inst)
}

/// Serialises every parameter. Values use the shortest round-trip form,
/// so parsing the output reproduces the instance bit for bit.
pub fn write_instance(inst: &ModelInstance) -> String {
    let mut out = String::new();
    for p in Param::ALL {
        out.push_str(&format!("{} = {:?}\n", p.path(), inst.get(p)));
    }
    out
}

#[derive(Default)]
struct ScenarioBuilder {
    name: String,
    line: usize,
    rate: Option<f64>,
    overrides: Vec<(Param, f64)>,
    perturbations: Vec<(Param, f64)>,
    reference: Option<&'static reference::ReferenceColumn>,
    expect: Vec<(ResultRow, f64)>,
    tolerance: Option<f64>,
    closure_kind: Option<String>,
    closure_target: Option<f64>,
    closure_bracket: Option<(f64, f64)>,
    closure_tolerance: Option<f64>,
    closure_max_iterations: Option<usize>,
    closure_grid: Option<Vec<f64>>,
}

impl ScenarioBuilder {
    fn apply(&mut self, n: usize, key: &str, value: &str) -> Result<()> {
        if let Some(p) = key.strip_prefix("perturb.") {
            self.perturbations.push((param(n, p)?, number(n, value)?));
        } else if let Some(p) = key.strip_prefix("set.") {
            self.overrides.push((param(n, p)?, number(n, value)?));
        } else if let Some(row) = key.strip_prefix("expect.") {
            let row = row.parse::<ResultRow>().map_err(|e| parse_err(n, e.to_string()))?;
            self.expect.push((row, number(n, value)?));
        } else {
            match key {
                "rate" => self.rate = Some(number(n, value)?),
                "tolerance" => self.tolerance = Some(number(n, value)?),
                "reference" => {
                    let col = reference::column(value)
                        .ok_or_else(|| parse_err(n, format!("unknown reference column `{value}`")))?;
                    self.reference = Some(col);
                }
                "closure.kind" => self.closure_kind = Some(value.to_string()),
                "closure.target" => self.closure_target = Some(number(n, value)?),
                "closure.tolerance" => self.closure_tolerance = Some(number(n, value)?),
                "closure.max_iterations" => {
                    let it = value
                        .parse::<usize>()
                        .map_err(|_| parse_err(n, format!("`{value}` is not a count")))?;
                    self.closure_max_iterations = Some(it);
                }
                "closure.bracket" => match number_list(n, value)?.as_slice() {
                    &[lo, hi] => self.closure_bracket = Some((lo, hi)),
                    _ => return Err(parse_err(n, "bracket needs exactly two rates `lo,hi`")),
                },
                "closure.grid" => self.closure_grid = Some(number_list(n, value)?),
                _ => return Err(parse_err(n, format!("unknown scenario key `{key}`"))),
            }
        }
        Ok(())
    }

    fn build(self) -> Result<Scenario> {
        let n = self.line;
        let closure = match (self.rate, self.closure_kind.as_deref()) {
            (Some(_), Some(_)) => return Err(parse_err(n, format!("scenario `{}` sets both rate and closure", self.name))),
            (None, None) => return Err(parse_err(n, format!("scenario `{}` has no rate or closure", self.name))),
            (Some(r), None) => ClosureSpec::fixed(r),
            (None, Some(kind)) => {
                let spec = closure_spec(kind, self.closure_target, self.closure_grid)
                    .map_err(|e| parse_err(n, e.to_string()))?;
                let mut spec = spec;
                if let Some((lo, hi)) = self.closure_bracket {
                    spec = spec.with_bracket(lo, hi);
                }
                if let Some(t) = self.closure_tolerance {
                    spec = spec.with_tolerance(t);
                }
                if let Some(m) = self.closure_max_iterations {
                    spec = spec.with_max_iterations(m);
                }
                spec
            }
        };
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        let reference = match (self.reference, self.expect.is_empty()) {
            (None, true) => None,
            (col, _) => {
                let mut row = match col {
                    Some(c) => ReferenceRow::from_values(&c.values, tolerance),
                    None => ReferenceRow::empty(tolerance),
                };
                for (r, v) in self.expect {
                    row.set(r, v);
                }
                Some(row)
            }
        };
        let scenario = Scenario {
            name: self.name,
            overrides: self.overrides,
            perturbations: self.perturbations,
            rate: closure,
            reference,
        };
        scenario.validate().map_err(|e| parse_err(n, e.to_string()))?;
        Ok(scenario)
    }
}

/// Builds a closure spec from its kind name and kind-specific data.
pub fn closure_spec(kind: &str, target: Option<f64>, grid: Option<Vec<f64>>) -> Result<ClosureSpec> {
    let missing = |what: &str| ModelError::InvalidClosure(format!("closure `{kind}` needs {what}"));
    let kind = match kind {
        "balanced_trade" => ClosureKind::BalancedTrade,
        "trade_share_target" => ClosureKind::TradeShareTarget { target: target.ok_or_else(|| missing("a target share"))? },
        "welfare_sweep" => ClosureKind::WelfareSweep { grid: grid.ok_or_else(|| missing("a rate grid"))? },
        "fixed" => return Err(ModelError::InvalidClosure("use `rate = <r>` for a fixed closure".into())),
        other => return Err(ModelError::InvalidClosure(format!("unknown closure kind `{other}`"))),
    };
    Ok(ClosureSpec::new(kind))
}

/// Parses a scenario file into scenarios in file order.
pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>> {
    let mut out = Vec::new();
    let mut current: Option<ScenarioBuilder> = None;
    for entry in entries(text) {
        let (n, line) = entry?;
        match line {
            Line::Header(name) => {
                if let Some(b) = current.take() {
                    out.push(b.build()?);
                }
                if out.iter().any(|s: &Scenario| s.name == name) {
                    return Err(parse_err(n, format!("duplicate scenario `{name}`")));
                }
                current = Some(ScenarioBuilder { name: name.to_string(), line: n, ..Default::default() });
            }
            Line::Pair(k, v) => match current.as_mut() {
                Some(b) => b.apply(n, k, v)?,
                None => return Err(parse_err(n, "setting before the first `[scenario]` header")),
            },
        }
    }
    if let Some(b) = current.take() {
        out.push(b.build()?);
    }
    if out.is_empty() {
        return Err(parse_err(0, "no scenarios defined"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statics::reference_suite;

    #[test]
    fn bundled_suite_matches_reference_table() {
        let parsed = parse_scenarios(REFERENCE_SUITE).unwrap();
        assert_eq!(parsed, reference_suite());
    }

    #[test]
    fn instance_roundtrip_is_exact() {
        let mut inst = ModelInstance::baseline();
        inst.preferences.gamma = 1.0 / 3.0;
        inst.technology.a1 = 1.15 * 1.0;
        inst.k0 = 31_756.000_000_000_004;
        let text = write_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn instance_accepts_bare_keys_and_comments() {
        let inst = parse_instance("# tweaked\ngamma = 2.0\ntechnology.A1 = 1.1 # trailing\n\n").unwrap();
        assert_eq!(inst.preferences.gamma, 2.0);
        assert_eq!(inst.technology.a1, 1.1);
        assert_eq!(inst.k0, 31_756.0);
    }

    #[test]
    fn instance_errors_carry_line_numbers() {
        let err = parse_instance("gamma = 1\nbogus = 3\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 2, .. }), "{err:?}");
        assert!(matches!(parse_instance("gamma = abc"), Err(ModelError::Parse { line: 1, .. })));
        assert!(matches!(parse_instance("alpha = 2"), Err(ModelError::Domain(_))));
        assert!(parse_instance("[x]\n").is_err());
    }

    #[test]
    fn scenario_with_closure_and_expectations() {
        let text = "[autarky]\nclosure.kind = balanced_trade\nclosure.bracket = 0.4821, 2.0\n\
                    closure.tolerance = 1e-11\nexpect.tb0 = 0\ntolerance = 1e-3\n\
                    [sweep]\nset.phi = 2\nclosure.kind = welfare_sweep\nclosure.grid = 0.4,0.5\n";
        let s = parse_scenarios(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].rate.kind, ClosureKind::BalancedTrade);
        assert_eq!(s[0].rate.bracket, (0.4821, 2.0));
        assert_eq!(s[0].rate.tolerance, 1e-11);
        let reference = s[0].reference.as_ref().unwrap();
        assert_eq!(reference.get(ResultRow::TradeBalance0), Some(0.0));
        assert_eq!(reference.get(ResultRow::Output0), None);
        assert_eq!(reference.tolerance, 1e-3);
        assert_eq!(s[1].overrides, vec![(Param::Phi, 2.0)]);
        assert_eq!(s[1].rate.kind, ClosureKind::WelfareSweep { grid: vec![0.4, 0.5] });
    }

    #[test]
    fn scenario_errors() {
        assert!(parse_scenarios("rate = 0.5").is_err());
        assert!(parse_scenarios("[a]\n").is_err());
        assert!(parse_scenarios("[a]\nrate = 0.5\nclosure.kind = balanced_trade").is_err());
        assert!(parse_scenarios("[a]\nrate = 0.5\n[a]\nrate = 0.4").is_err());
        assert!(parse_scenarios("[a]\nrate = 0.5\nperturb.rho = 1.1\nset.rho = 0.2").is_err());
        assert!(parse_scenarios("[a]\nrate = 0.5\nreference = nowhere").is_err());
        assert!(parse_scenarios("[a]\nclosure.kind = trade_share_target").is_err());
        assert!(parse_scenarios("[a]\nrate = 0.5\nexpect.zz = 1").is_err());
        assert!(parse_scenarios("").is_err());
        assert!(parse_scenarios("[a\nrate = 1").is_err());
    }
}
