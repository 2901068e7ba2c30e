//! Embedded comparative-statics reference table.
//!
//! Five columns: the baseline economy and four one-parameter scenarios in
//! which `gamma`, `theta`, `rho` or `A1` is raised by 15%, each solved at
//! its published control rate.

use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;
use crate::model::Param;

/// One result row of the comparative-statics table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResultRow {
    TradeBalance0,
    Rate,
    RatePerYear,
    Investment0,
    Output1,
    Output0,
    Hours0,
    Consumption0,
    Consumption1,
    InvestmentShare,
    ConsumptionShare,
    RelativeWage,
    TradeShare,
    Wage0,
    WageOverRate,
    Wage1,
}

impl ResultRow {
    pub const ALL: [ResultRow; 16] = [
        ResultRow::TradeBalance0,
        ResultRow::Rate,
        ResultRow::RatePerYear,
        ResultRow::Investment0,
        ResultRow::Output1,
        ResultRow::Output0,
        ResultRow::Hours0,
        ResultRow::Consumption0,
        ResultRow::Consumption1,
        ResultRow::InvestmentShare,
        ResultRow::ConsumptionShare,
        ResultRow::RelativeWage,
        ResultRow::TradeShare,
        ResultRow::Wage0,
        ResultRow::WageOverRate,
        ResultRow::Wage1,
    ];

    /// Machine key used in scenario files and JSON output.
    pub fn key(self) -> &'static str {
        match self {
            ResultRow::TradeBalance0 => "tb0",
            ResultRow::Rate => "r",
            ResultRow::RatePerYear => "r_per_year",
            ResultRow::Investment0 => "inv0",
            ResultRow::Output1 => "y1",
            ResultRow::Output0 => "y0",
            ResultRow::Hours0 => "l0",
            ResultRow::Consumption0 => "c0",
            ResultRow::Consumption1 => "c1",
            ResultRow::InvestmentShare => "inv0_y0",
            ResultRow::ConsumptionShare => "c0_y0",
            ResultRow::RelativeWage => "w0_w1_disc",
            ResultRow::TradeShare => "tb0_y0",
            ResultRow::Wage0 => "w0",
            ResultRow::WageOverRate => "w0_r",
            ResultRow::Wage1 => "w1",
        }
    }

    /// Row label as printed in the table.
    pub fn label(self) -> &'static str {
        match self {
            ResultRow::TradeBalance0 => "X0-M0",
            ResultRow::Rate => "r",
            ResultRow::RatePerYear => "Per year r",
            ResultRow::Investment0 => "Inv0",
            ResultRow::Output1 => "Y1",
            ResultRow::Output0 => "Y0",
            ResultRow::Hours0 => "l0",
            ResultRow::Consumption0 => "C0",
            ResultRow::Consumption1 => "C1",
            ResultRow::InvestmentShare => "Inv0/Y0",
            ResultRow::ConsumptionShare => "C0/Y0",
            ResultRow::RelativeWage => "w0/(w1/(1+r))",
            ResultRow::TradeShare => "(X0-M0)/Y0",
            ResultRow::Wage0 => "w0",
            ResultRow::WageOverRate => "w0/r",
            ResultRow::Wage1 => "w1",
        }
    }

    pub fn index(self) -> usize {
        ResultRow::ALL.iter().position(|&r| r == self).expect("row listed in ALL")
    }
}

impl fmt::Display for ResultRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ResultRow {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        let s = s.trim();
        ResultRow::ALL
            .iter()
            .copied()
            .find(|r| r.key() == s || r.label() == s)
            .ok_or_else(|| ModelError::InvalidScenario(format!("unknown result row `{s}`")))
    }
}

/// Values for all sixteen result rows, indexed by [`ResultRow`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValues(pub [f64; 16]);

impl RowValues {
    pub fn get(&self, row: ResultRow) -> f64 {
        self.0[row.index()]
    }

    pub fn set(&mut self, row: ResultRow, value: f64) {
        self.0[row.index()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (ResultRow, f64)> + '_ {
        ResultRow::ALL.iter().map(move |&r| (r, self.get(r)))
    }
}

/// One column of the published table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceColumn {
    pub name: &'static str,
    /// Parameter raised by 15% relative to the baseline, if any.
    pub perturbed: Option<Param>,
    pub values: RowValues,
}

/// Size of the one-parameter perturbations.
pub const PERTURBATION_FACTOR: f64 = 1.15;

pub const BASELINE: ReferenceColumn = ReferenceColumn {
    name: "baseline",
    perturbed: None,
    values: RowValues([
        -14948.74, 0.4821, 0.0249, 33504.96, 99316.97, 96492.12, 29320.00, 77935.89, 77161.10,
        0.3472, 0.8077, 1.4459, -0.1549, 0.1646, 0.3413, 0.1687,
    ]),
};

pub const ESC_II: ReferenceColumn = ReferenceColumn {
    name: "esc_ii",
    perturbed: Some(Param::Gamma),
    values: RowValues([
        -14908.06, 0.4821, 0.0249, 33504.96, 99316.97, 96492.12, 29320.00, 77895.21, 77221.39,
        0.3472, 0.8073, 1.4459, -0.1545, 0.1646, 0.3413, 0.1687,
    ]),
};

pub const ESC_III: ReferenceColumn = ReferenceColumn {
    name: "esc_iii",
    perturbed: Some(Param::Theta),
    values: RowValues([
        -14812.42, 0.4839, 0.0250, 33424.65, 99197.87, 96527.31, 29341.39, 77915.08, 77217.68,
        0.3463, 0.8072, 1.4488, -0.1535, 0.1645, 0.3399, 0.1685,
    ]),
};

pub const ESC_IV: ReferenceColumn = ReferenceColumn {
    name: "esc_iv",
    perturbed: Some(Param::Rho),
    values: RowValues([
        -11359.92, 0.5560, 0.0280, 30397.05, 94598.58, 96739.03, 29470.25, 77701.90, 76921.99,
        0.3142, 0.8032, 1.5896, -0.1174, 0.1641, 0.2952, 0.1607,
    ]),
};

pub const ESC_V: ReferenceColumn = ReferenceColumn {
    name: "esc_v",
    perturbed: Some(Param::A1),
    values: RowValues([
        -21991.62, 0.4979, 0.0256, 37722.37, 113010.11, 95891.88, 28956.36, 80161.13, 80068.45,
        0.3934, 0.8360, 1.2923, -0.2293, 0.1656, 0.3325, 0.1919,
    ]),
};

/// All reference columns in table order.
pub const TABLE: [ReferenceColumn; 5] = [BASELINE, ESC_II, ESC_III, ESC_IV, ESC_V];

/// Looks up a reference column by name.
pub fn column(name: &str) -> Option<&'static ReferenceColumn> {
    TABLE.iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_roundtrip_through_keys_and_labels() {
        for (i, row) in ResultRow::ALL.into_iter().enumerate() {
            assert_eq!(row.index(), i);
            assert_eq!(row.key().parse::<ResultRow>().unwrap(), row);
            assert_eq!(row.label().parse::<ResultRow>().unwrap(), row);
        }
        assert!("bogus".parse::<ResultRow>().is_err());
    }

    #[test]
    fn ratio_rows_consistent_with_level_rows() {
        for col in TABLE {
            let v = col.values;
            let y0 = v.get(ResultRow::Output0);
            let r = v.get(ResultRow::Rate);
            let ratio = |num: f64, den: f64| num / den;
            let pairs = [
                (ratio(v.get(ResultRow::Investment0), y0), v.get(ResultRow::InvestmentShare)),
                (ratio(v.get(ResultRow::Consumption0), y0), v.get(ResultRow::ConsumptionShare)),
                (ratio(v.get(ResultRow::TradeBalance0), y0), v.get(ResultRow::TradeShare)),
                (ratio(v.get(ResultRow::Wage0), r), v.get(ResultRow::WageOverRate)),
                (
                    v.get(ResultRow::Wage0) / (v.get(ResultRow::Wage1) / (1.0 + r)),
                    v.get(ResultRow::RelativeWage),
                ),
            ];
            for (derived, printed) in pairs {
                assert!((derived - printed).abs() <= 2e-3 * printed.abs().max(1.0), "{}: {derived} vs {printed}", col.name);
            }
        }
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(column("esc_iv").unwrap().perturbed, Some(Param::Rho));
        assert!(column("esc_vi").is_none());
    }
}
