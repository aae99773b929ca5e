//! Verification of single cases and of filtered selections.

use std::time::Instant;

use globset::Glob;
use qrucible_core::SeriesContext;
use qrucible_dsl::elaborate_value;
use rayon::prelude::*;

use crate::registry::Case;
use crate::report::{MismatchReport, Status, VerifyReport};
use crate::{HarnessError, Result};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Glob matched against case names, base names and groups.
    pub filter: Option<String>,
    /// Comparison order as a power of q, replacing each case's own.
    pub order: Option<i64>,
    /// Grid denominator replacing each case's own.
    pub denom: Option<u32>,
    /// Worker threads; 0 picks the number of CPUs.
    pub jobs: usize,
}

/// Exact comparison of both sides below the case order. Evaluation errors
/// become `SKIP` with the error text as reason.
pub fn verify(c: &Case) -> VerifyReport {
    let start = Instant::now();
    let case = &c.case;
    let mut report = VerifyReport {
        name: case.name.clone(),
        group: c.group.clone(),
        status: Status::Pass,
        proven_order: case.order,
        denom: case.denom,
        first_mismatch: None,
        elapsed: Default::default(),
        paper_ref: case.paper_ref.clone(),
    };
    let outcome = (|| {
        let ctx = SeriesContext::new(case.denom, case.order).map_err(|e| e.to_string())?;
        let lhs = elaborate_value(&case.lhs, &ctx, case.t_order).map_err(|e| format!("lhs: {e}"))?;
        let rhs = elaborate_value(&case.rhs, &ctx, case.t_order).map_err(|e| format!("rhs: {e}"))?;
        lhs.first_mismatch(&rhs, case.order).map_err(|e| e.to_string())
    })();
    match outcome {
        Ok(None) => {}
        Ok(Some(m)) => {
            report.status = Status::Fail;
            report.proven_order = m.exp;
            report.first_mismatch = Some(MismatchReport::new(&m, case.denom));
        }
        Err(reason) => {
            report.status = Status::Skip(reason);
            report.proven_order = 0;
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Cases whose name, base name or group matches `filter`.
pub fn select(cases: &[Case], filter: Option<&str>) -> Result<Vec<Case>> {
    let Some(pat) = filter else {
        return Ok(cases.to_vec());
    };
    let m = Glob::new(pat)?.compile_matcher();
    Ok(cases
        .iter()
        .filter(|c| m.is_match(c.name()) || m.is_match(c.base_name()) || m.is_match(&c.group))
        .cloned()
        .collect())
}

fn with_overrides(mut c: Case, opts: &RunOptions) -> Result<Case> {
    let old = c.case.denom as i64;
    if let Some(d) = opts.denom {
        if d == 0 {
            return Err(HarnessError::Override("denominator must be positive".into()));
        }
        c.case.denom = d;
        // keep the same power of q
        c.case.order = (c.case.order * d as i64 + old - 1) / old;
    }
    if let Some(n) = opts.order {
        if n < 0 {
            return Err(HarnessError::Override("order must be nonnegative".into()));
        }
        c.case.order = n * c.case.denom as i64;
    }
    Ok(c)
}

/// Verify the selected cases on a bounded pool. Reports follow case order.
pub fn run_suite(cases: &[Case], opts: &RunOptions) -> Result<Vec<VerifyReport>> {
    let chosen = select(cases, opts.filter.as_deref())?
        .into_iter()
        .map(|c| with_overrides(c, opts))
        .collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build()?;
    Ok(pool.install(|| chosen.par_iter().map(verify).collect()))
}

/// 0 when every report passes; `strict` also counts skips as failures.
pub fn exit_code(reports: &[VerifyReport], strict: bool) -> i32 {
    let bad = reports.iter().any(|r| match r.status {
        Status::Pass => false,
        Status::Fail => true,
        Status::Skip(_) => strict,
    });
    i32::from(bad)
}
