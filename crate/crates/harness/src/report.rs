//! Per-case results and their JSON form.

use std::time::Duration;

use num_rational::Rational64;
use qrucible_core::series::fmt_exponent;
use qrucible_dsl::Mismatch;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip(_) => "SKIP",
        }
    }
}

/// First differing coefficient, with the q-exponent in units of 1/denom.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MismatchReport {
    pub scaled_exponent: i64,
    pub exponent: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tdeg: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zdeg: Option<i64>,
    pub lhs: String,
    pub rhs: String,
}

impl MismatchReport {
    pub fn new(m: &Mismatch, denom: u32) -> Self {
        MismatchReport {
            scaled_exponent: m.exp,
            exponent: fmt_exponent(Rational64::new(m.exp, denom as i64)),
            tdeg: m.tdeg,
            zdeg: m.zdeg,
            lhs: m.lhs.to_string(),
            rhs: m.rhs.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub name: String,
    pub group: String,
    pub status: Status,
    /// Agreement proven below this exponent, in units of 1/denom.
    pub proven_order: i64,
    pub denom: u32,
    pub first_mismatch: Option<MismatchReport>,
    pub elapsed: Duration,
    pub paper_ref: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Row<'a> {
    name: &'a str,
    group: &'a str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    proven_order: i64,
    denom: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_mismatch: Option<&'a MismatchReport>,
    elapsed_ms: u64,
    paper_ref: &'a str,
}

pub fn reports_to_json(reports: &[VerifyReport]) -> serde_json::Value {
    let rows: Vec<Row> = reports
        .iter()
        .map(|r| Row {
            name: &r.name,
            group: &r.group,
            status: r.status.label(),
            reason: match &r.status {
                Status::Skip(why) => Some(why),
                _ => None,
            },
            proven_order: r.proven_order,
            denom: r.denom,
            first_mismatch: r.first_mismatch.as_ref(),
            elapsed_ms: r.elapsed.as_millis() as u64,
            paper_ref: &r.paper_ref,
        })
        .collect();
    serde_json::to_value(rows).expect("rows serialize")
}
