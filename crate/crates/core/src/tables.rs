//! Rows of the three reference tables: joint-measurability thresholds for
//! orthogonal and trine axes, the equatorial threshold, and the chained
//! inequality bounds.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::moments::{attenuated_bound, classical_bound, quantum_bound};
use crate::povm::{eta_necessary, eta_opt_equatorial, eta_opt_uola, eta_sufficient, AxisFamily};
use crate::seqsim::{chained_sequential_value, SimMode};

/// Which bound the published threshold corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrintedBound {
    /// Necessary and sufficient bounds coincide.
    Both,
    Necessary,
    Sufficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub label: String,
    pub n: usize,
    pub eta_necessary: f64,
    pub eta_sufficient: f64,
    pub reference_value: f64,
    pub reference_bound: PrintedBound,
}

/// Published thresholds for orthogonal and trine axes.
const TABLE1: [(&str, AxisFamily, f64); 4] = [
    ("orthogonal", AxisFamily::Orthogonal(3), 0.577_350_269_189_625_8),
    ("orthogonal", AxisFamily::Orthogonal(2), FRAC_1_SQRT_2),
    ("trine", AxisFamily::Trine(3), 2.0 / 3.0),
    ("trine", AxisFamily::Trine(2), 0.732),
];

pub fn table1() -> Result<Vec<Table1Row>> {
    TABLE1
        .iter()
        .map(|&(label, family, reference_value)| {
            let axes = family.axes()?;
            let eta_necessary = eta_necessary(&axes)?;
            let eta_sufficient = eta_sufficient(&axes)?;
            let reference_bound = if (eta_necessary - eta_sufficient).abs() < 1e-12 {
                PrintedBound::Both
            } else if (eta_sufficient - reference_value).abs() < (eta_necessary - reference_value).abs() {
                PrintedBound::Sufficient
            } else {
                PrintedBound::Necessary
            };
            Ok(Table1Row { label: label.to_string(), n: family.n(), eta_necessary, eta_sufficient, reference_value, reference_bound })
        })
        .collect()
}

/// Rows of the equatorial-threshold table as published.
#[allow(clippy::approx_constant)]
pub const TABLE2_PUBLISHED: [(usize, f64); 8] = [
    (3, 0.6666),
    (4, 0.6532),
    (5, 0.6472),
    (6, 0.6439),
    (10, 0.6392),
    (20, 0.6372),
    (50, 0.6367),
    (100, 0.6366),
];

/// Rows of the chained-bound table as published: `(N, classical, quantum, attenuated)`.
pub const TABLE3_PUBLISHED: [(usize, f64, f64, f64); 8] = [
    (3, 1.0, 1.5, 1.0),
    (4, 2.0, 2.83, 1.85),
    (5, 3.0, 4.05, 2.62),
    (6, 4.0, 5.20, 3.35),
    (10, 8.0, 9.51, 6.08),
    (20, 18.0, 19.75, 12.59),
    (50, 48.0, 49.90, 31.77),
    (100, 98.0, 99.95, 63.62),
];

/// The N values of the published tables.
pub fn published_ns() -> Vec<usize> {
    TABLE2_PUBLISHED.iter().map(|r| r.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub n: usize,
    pub eta_opt: f64,
    pub uola: f64,
    pub reference_value: Option<f64>,
}

pub fn table2(ns: &[usize]) -> Result<Vec<Table2Row>> {
    ns.iter()
        .map(|&n| {
            Ok(Table2Row {
                n,
                eta_opt: eta_opt_equatorial(n)?,
                uola: eta_opt_uola(n)?,
                reference_value: TABLE2_PUBLISHED.iter().find(|r| r.0 == n).map(|r| r.1),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table3Row {
    pub n: usize,
    pub classical: f64,
    pub quantum: f64,
    pub attenuated: f64,
    /// Sampled `S_N(η_opt)` when requested.
    pub montecarlo: Option<f64>,
    pub montecarlo_stderr: Option<f64>,
}

/// Bounds per N; with `montecarlo = Some((shots, seed))` also a sampled
/// value of the chain at `η_opt(N)`.
pub fn table3(ns: &[usize], montecarlo: Option<(usize, u64)>) -> Result<Vec<Table3Row>> {
    ns.iter()
        .map(|&n| {
            let (mc, se) = match montecarlo {
                Some((shots, seed)) => {
                    let v = chained_sequential_value(n, eta_opt_equatorial(n)?, SimMode::MonteCarlo { shots, seed })?;
                    (Some(v.value), v.stderr)
                }
                None => (None, None),
            };
            Ok(Table3Row {
                n,
                classical: classical_bound(n)?,
                quantum: quantum_bound(n)?,
                attenuated: attenuated_bound(n)?,
                montecarlo: mc,
                montecarlo_stderr: se,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_labels_printed_bound() {
        let rows = table1().unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].reference_bound, PrintedBound::Both);
        assert_eq!(rows[2].reference_bound, PrintedBound::Both);
        assert_eq!(rows[3].reference_bound, PrintedBound::Sufficient);
        assert!((rows[3].eta_necessary - 0.8660).abs() < 1e-4);
        assert!((rows[3].eta_sufficient - 0.7320).abs() < 1e-4);
    }

    #[test]
    fn table2_and_3_shapes() {
        let t2 = table2(&[5, 6, 7]).unwrap();
        assert_eq!(t2[2].reference_value, None);
        assert!((t2[0].eta_opt - 0.6472).abs() < 1e-4);
        let t3 = table3(&[20], None).unwrap();
        assert!((t3[0].attenuated - 12.59).abs() < 5e-3);
        assert!(table3(&[2], None).is_err());
    }
}
