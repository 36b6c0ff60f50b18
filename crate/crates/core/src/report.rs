//! Machine-readable outcome of a single verification.

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::algebra::{format_rational, MPoly, Rational};
use crate::bigfloat::BigFloat;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub params: Value,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: String,
    pub rel_err: String,
    pub tail_bound: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CheckReport {
    /// Exact scalar comparison.
    pub fn exact(check: impl Into<String>, params: Value, lhs: &Rational, rhs: &Rational) -> Self {
        let diff = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel = if scale.is_zero() { Rational::zero() } else { &diff / scale };
        CheckReport {
            check: check.into(),
            params,
            lhs: format_rational(lhs),
            rhs: format_rational(rhs),
            abs_err: format_rational(&diff),
            rel_err: format_rational(&rel),
            tail_bound: "0".into(),
            pass: diff.is_zero(),
            detail: None,
        }
    }

    /// Exact polynomial comparison; the error fields hold the largest coefficient of the
    /// difference.
    pub fn exact_poly(check: impl Into<String>, params: Value, lhs: &MPoly, rhs: &MPoly) -> Self {
        let diff = lhs - rhs;
        let err = diff.max_coeff_abs();
        CheckReport {
            check: check.into(),
            params,
            lhs: format!("poly[{} terms]", lhs.len()),
            rhs: format!("poly[{} terms]", rhs.len()),
            abs_err: format_rational(&err),
            rel_err: format_rational(&err),
            tail_bound: "0".into(),
            pass: diff.is_zero(),
            detail: None,
        }
    }

    /// Numeric comparison: passes when `|lhs - rhs| <= tol * max(|lhs|, |rhs|, floor) + tail`.
    pub fn numeric(
        check: impl Into<String>,
        params: Value,
        lhs: &BigFloat,
        rhs: &BigFloat,
        tail: &BigFloat,
        tol: &BigFloat,
        floor: &BigFloat,
    ) -> Self {
        let diff = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs()).max(floor.clone());
        let rel = &diff / &scale;
        let pass = diff <= &(tol * &scale) + tail;
        CheckReport {
            check: check.into(),
            params,
            lhs: lhs.to_sci(25),
            rhs: rhs.to_sci(25),
            abs_err: diff.to_sci(6),
            rel_err: rel.to_sci(6),
            tail_bound: tail.to_sci(6),
            pass,
            detail: None,
        }
    }

    /// A check that could not produce a comparison, e.g. because a construction failed.
    pub fn failure(check: impl Into<String>, params: Value, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        CheckReport {
            check: check.into(),
            params,
            lhs: String::new(),
            rhs: String::new(),
            abs_err: String::new(),
            rel_err: String::new(),
            tail_bound: String::new(),
            pass: false,
            detail: Some(Value::String(reason)),
        }
    }

    /// A boolean property with no natural two-sided form.
    pub fn boolean(check: impl Into<String>, params: Value, pass: bool, detail: Value) -> Self {
        CheckReport {
            check: check.into(),
            params,
            lhs: pass.to_string(),
            rhs: "true".into(),
            abs_err: if pass { "0" } else { "1" }.into(),
            rel_err: if pass { "0" } else { "1" }.into(),
            tail_bound: "0".into(),
            pass,
            detail: Some(detail),
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// First failing report, for assertion messages.
pub fn first_failure(reports: &[CheckReport]) -> Option<&CheckReport> {
    reports.iter().find(|r| !r.pass)
}

/// Converts a fallible check into a report list, turning errors into a single failure.
pub fn or_failure(
    check: &str,
    params: Value,
    res: crate::error::Result<Vec<CheckReport>>,
) -> Vec<CheckReport> {
    res.unwrap_or_else(|e| vec![CheckReport::failure(check, params, e.to_string())])
}
