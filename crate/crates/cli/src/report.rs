//! Sweep report output: CSV rows (RFC 4180 quoting) and the JSON summary.
//!
//! JSON summary schema, fields always present and in this order:
//!
//! ```text
//! {
//!   "schema": "halflearn-sweep/1",
//!   "d": int, "n": int, "epsilon": float, "tau": float, "seed": int,
//!   "marginal": string, "adversary": string, "trials_per_cell": int,
//!   "cells": [
//!     {"budget": float, "t_star": float, "trials": int, "accepted": int,
//!      "median_error": float|null}
//!   ],
//!   "c_hat": float|null
//! }
//! ```
//!
//! `median_error` is the median holdout error over the cell's accepted
//! trials (null if every trial rejected). `c_hat` is the median of
//! error/√budget over all accepted trials in cells with a positive budget:
//! the empirical constant in front of the √opt error term.

use serde::Serialize;

pub const CSV_HEADER: &str = "budget,t_star,trial,verdict,threshold,error,seconds";

/// One CSV row; `threshold` and `error` stay empty on rejected trials.
#[derive(Debug, Clone)]
pub struct TrialRow {
    pub budget: f64,
    pub t_star: f64,
    pub trial: usize,
    pub verdict: &'static str,
    pub threshold: Option<f64>,
    pub error: Option<f64>,
    pub seconds: f64,
}

impl TrialRow {
    pub fn to_csv(&self) -> String {
        let fields = [
            self.budget.to_string(),
            self.t_star.to_string(),
            self.trial.to_string(),
            self.verdict.to_string(),
            self.threshold.map(|t| t.to_string()).unwrap_or_default(),
            self.error.map(|e| e.to_string()).unwrap_or_default(),
            format!("{:.3}", self.seconds),
        ];
        fields
            .iter()
            .map(|f| quote(f))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub schema: &'static str,
    pub d: usize,
    pub n: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub seed: u64,
    pub marginal: String,
    pub adversary: String,
    pub trials_per_cell: usize,
    pub cells: Vec<CellSummary>,
    pub c_hat: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CellSummary {
    pub budget: f64,
    pub t_star: f64,
    pub trials: usize,
    pub accepted: usize,
    pub median_error: Option<f64>,
}

/// Median of an unsorted slice; even lengths average the middle pair.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_render_and_quote() {
        let row = TrialRow {
            budget: 0.005,
            t_star: 1.0,
            trial: 3,
            verdict: "accept",
            threshold: Some(-1.05),
            error: Some(0.0125),
            seconds: 0.0,
        };
        assert_eq!(row.to_csv(), "0.005,1,3,accept,-1.05,0.0125,0.000");
        assert_eq!(quote("a,b"), "\"a,b\"");
        assert_eq!(quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn rejected_rows_leave_blanks() {
        let row = TrialRow {
            budget: 0.0,
            t_star: 2.0,
            trial: 0,
            verdict: "reject",
            threshold: None,
            error: None,
            seconds: 1.5,
        };
        assert_eq!(row.to_csv(), "0,2,0,reject,,,1.500");
    }

    #[test]
    fn median_handles_both_parities() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
    }
}
