//! CSV and JSON emission with fixed numeric formatting.
//!
//! JSON numbers carry 15 significant digits, CSV cells 6. Output depends only
//! on the values, so identical runs produce byte-identical reports.

use serde_json::{json, Map, Value};

use crate::closure::ClosureReport;
use crate::model::{annualize_rate, Equilibrium, ModelInstance};
use crate::reference::ResultRow;
use crate::schedules::{ScheduleCurve, ScheduleMode};
use crate::statics::SuiteReport;

pub const JSON_DIGITS: usize = 15;
pub const CSV_DIGITS: usize = 6;

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Formats `x` with `digits` significant digits, in plain notation when the
/// decimal exponent lies in `[-5, 15)` and scientific notation otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let rounded: f64 = sci.parse().expect("formatted float parses");
        trim_zeros(format!("{:.*}", decimals, rounded))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x, JSON_DIGITS)).map(Value::Number).unwrap_or(Value::Null)
}

fn csv(x: f64) -> String {
    format_sig(x, CSV_DIGITS)
}

/// Named scalar fields of an equilibrium, in report order.
pub fn equilibrium_fields(eq: &Equilibrium, inst: &ModelInstance) -> Vec<(&'static str, f64)> {
    let (p, f) = (&eq.present, &eq.future);
    let r_year = annualize_rate(eq.rate, inst.years_per_period).unwrap_or(f64::NAN);
    vec![
        ("r", eq.rate),
        ("r_per_year", r_year),
        ("y0", p.output),
        ("y1", f.output),
        ("k0", p.capital),
        ("k1", f.capital),
        ("L0", p.labor),
        ("L1", f.labor),
        ("l0", p.hours),
        ("l1", f.hours),
        ("w0", p.wage),
        ("w1", f.wage),
        ("c0", p.consumption),
        ("c1", f.consumption),
        ("C0", p.consumption_total),
        ("C1", f.consumption_total),
        ("x0", p.dividend),
        ("x1", f.dividend),
        ("tax0", p.tax),
        ("tax1", f.tax),
        ("T0", p.tax_total),
        ("T1", f.tax_total),
        ("tb0", p.trade_balance),
        ("tb1", f.trade_balance),
        ("i0", eq.investment),
        ("q", eq.q),
        ("pv_income", eq.pv_income),
        ("s0n", eq.national_saving),
        ("s1x", eq.external_saving),
        ("welfare", eq.welfare),
        ("walras_residual", eq.walras_residual),
    ]
}

pub fn equilibrium_json(eq: &Equilibrium, inst: &ModelInstance) -> Value {
    let mut map = Map::new();
    for (k, v) in equilibrium_fields(eq, inst) {
        map.insert(k.into(), num(v));
    }
    map.insert("l0_binding".into(), Value::Bool(eq.l0_binding));
    Value::Object(map)
}

pub fn equilibrium_csv(eq: &Equilibrium, inst: &ModelInstance) -> String {
    let mut out = String::from("quantity,value\n");
    for (k, v) in equilibrium_fields(eq, inst) {
        out.push_str(&format!("{k},{}\n", csv(v)));
    }
    out.push_str(&format!("l0_binding,{}\n", eq.l0_binding));
    out
}

pub fn closure_json(report: &ClosureReport) -> Value {
    json!({
        "strategy": report.strategy,
        "rate": num(report.rate),
        "iterations": report.iterations,
        "objective": report.objective.map(num).unwrap_or(Value::Null),
        "bracket": report.bracket.map(|(lo, hi)| json!([num(lo), num(hi)])).unwrap_or(Value::Null),
    })
}

pub fn closure_csv(report: &ClosureReport) -> String {
    let mut out = String::from("quantity,value\n");
    out.push_str(&format!("strategy,{}\n", report.strategy));
    out.push_str(&format!("closure_rate,{}\n", csv(report.rate)));
    out.push_str(&format!("iterations,{}\n", report.iterations));
    if let Some(obj) = report.objective {
        out.push_str(&format!("objective,{}\n", csv(obj)));
    }
    out
}

/// One column per scenario, one row per result label.
pub fn suite_csv(report: &SuiteReport) -> String {
    let mut out = String::from("row");
    for o in &report.outcomes {
        out.push(',');
        out.push_str(&o.name);
    }
    out.push('\n');
    for row in ResultRow::ALL {
        out.push_str(row.label());
        for o in &report.outcomes {
            out.push(',');
            if let Ok(sol) = &o.result {
                out.push_str(&csv(sol.rows.get(row)));
            }
        }
        out.push('\n');
    }
    out
}

pub fn suite_json(report: &SuiteReport) -> Value {
    let scenarios: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| match &o.result {
            Err(e) => json!({ "name": o.name, "error": e.to_string(), "pass": false }),
            Ok(sol) => {
                let mut rows = Map::new();
                for row in ResultRow::ALL {
                    let mut cell = Map::new();
                    cell.insert("solved".into(), num(sol.rows.get(row)));
                    if let Some(c) = sol.comparisons.iter().find(|c| c.row == row) {
                        cell.insert("expected".into(), num(c.expected));
                        cell.insert("deviation".into(), num(c.deviation));
                        cell.insert("pass".into(), Value::Bool(c.pass));
                    }
                    rows.insert(row.key().into(), Value::Object(cell));
                }
                json!({
                    "name": o.name,
                    "closure": closure_json(&sol.closure),
                    "rows": rows,
                    "pass": o.passed(),
                })
            }
        })
        .collect();
    let checks: Vec<Value> = report
        .sign_checks
        .iter()
        .map(|c| {
            json!({
                "scenario": c.scenario,
                "parameter": c.parameter.name(),
                "quantity": c.quantity,
                "expected": format!("{:?}", c.expected).to_lowercase(),
                "base": num(c.base),
                "perturbed": num(c.perturbed),
                "pass": c.pass,
            })
        })
        .collect();
    json!({ "scenarios": scenarios, "sign_checks": checks, "pass": report.passed() })
}

pub fn schedule_csv(curve: &ScheduleCurve) -> String {
    let mut out = String::from("r,I0,S0N,S1X,residual\n");
    for i in 0..curve.grid.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv(curve.grid[i]),
            csv(curve.i0[i]),
            csv(curve.s0n[i]),
            csv(curve.s1x[i]),
            csv(curve.residual[i])
        ));
    }
    out
}

pub fn schedule_json(curve: &ScheduleCurve) -> Value {
    let (mode, r_ref) = match curve.mode {
        ScheduleMode::FullEquilibrium => ("full", Value::Null),
        ScheduleMode::Partial { r_ref } => ("partial", num(r_ref)),
    };
    let points: Vec<Value> = (0..curve.grid.len())
        .map(|i| {
            let s = &curve.slopes[i];
            json!({
                "r": num(curve.grid[i]),
                "I0": num(curve.i0[i]),
                "S0N": num(curve.s0n[i]),
                "S1X": num(curve.s1x[i]),
                "residual": num(curve.residual[i]),
                "slope_I0": num(s.i0),
                "slope_S": num(s.saving),
            })
        })
        .collect();
    let skipped: Vec<Value> = curve
        .skipped
        .iter()
        .map(|(r, e)| json!({ "r": num(*r), "error": e.to_string() }))
        .collect();
    json!({
        "mode": mode,
        "r_ref": r_ref,
        "flagged": curve.is_flagged(),
        "points": points,
        "skipped": skipped,
    })
}

/// Serialises a JSON value with a trailing newline.
pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::solve_at_rate;
    use crate::statics::{reference_suite, run_suite};

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(96_492.667478, 6), "96492.7");
        assert_eq!(format_sig(-14_950.121, 6), "-14950.1");
        assert_eq!(format_sig(0.0248961, 6), "0.0248961");
        assert_eq!(format_sig(1.5, 6), "1.5");
        assert_eq!(format_sig(-7.2e-12, 6), "-7.2e-12");
        assert_eq!(format_sig(9.9e43, 6), "9.9e43");
        assert_eq!(format_sig(1234567.0, 3), "1230000");
        assert_eq!(round_sig(0.123_456_789_012_345_67, 15), 0.123456789012346);
    }

    #[test]
    fn json_output_is_deterministic() {
        let inst = ModelInstance::baseline();
        let a = to_json_string(&equilibrium_json(&solve_at_rate(&inst, 0.4821).unwrap(), &inst));
        let b = to_json_string(&equilibrium_json(&solve_at_rate(&inst, 0.4821).unwrap(), &inst));
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        let tb0 = v["tb0"].as_f64().unwrap();
        assert!(((tb0 + 14_948.74) / 14_948.74).abs() < 2e-3);
        assert_eq!(v["l0_binding"], Value::Bool(false));
    }

    #[test]
    fn suite_csv_is_transposed_table() {
        let report = run_suite(&ModelInstance::baseline(), &reference_suite());
        let text = suite_csv(&report);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "row,baseline,esc_ii,esc_iii,esc_iv,esc_v");
        assert!(lines[2].starts_with("r,0.4821,0.4821,0.4839,0.556,0.4979"));
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 6));
        let json = suite_json(&report);
        assert_eq!(json["pass"], Value::Bool(true));
        assert_eq!(json["scenarios"].as_array().unwrap().len(), 5);
    }
}
