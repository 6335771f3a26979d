use super::{fmt_real, CsvTable};
use crate::error::Result;
use crate::experiments::{BasinResult, CapRow, MethodHistory, SweepResult, VerifyReport};
use crate::linesearch::LineSearchStatus;
use crate::methods::RunTrace;

fn status_label(status: Option<LineSearchStatus>) -> &'static str {
    match status {
        Some(LineSearchStatus::Accepted) => "accepted",
        Some(LineSearchStatus::BisectionCapReached) => "bisection-cap",
        Some(LineSearchStatus::DoublingCapReached) => "doubling-cap",
        None => "final",
    }
}

/// One row per iterate: `k, u, v, f, t, S_N, status` where `u, v` are the
/// first two coordinates and `t` is empty when no step was taken.
pub fn trajectory_table(trace: &RunTrace) -> Result<CsvTable> {
    let mut t = CsvTable::new(["k", "u", "v", "f", "t", "S_N", "status"]);
    for r in &trace.records {
        t.push(vec![
            r.k.to_string(),
            fmt_real(r.point[0]),
            r.point.get(1).map_or_else(String::new, |v| fmt_real(*v)),
            fmt_real(r.f),
            r.step.map_or_else(String::new, fmt_real),
            fmt_real(r.cumulative_step_sum),
            status_label(r.linesearch).to_string(),
        ])?;
    }
    Ok(t)
}

pub fn sweep_table(result: &SweepResult) -> Result<CsvTable> {
    let mut t = CsvTable::new([
        "a",
        "c1",
        "tau",
        "failures",
        "successes",
        "errors",
        "trials",
        "failure_rate",
    ]);
    for r in &result.rows {
        t.push(vec![
            fmt_real(r.a),
            fmt_real(r.c1),
            fmt_real(r.tau),
            r.failures.to_string(),
            r.successes.to_string(),
            r.errors.to_string(),
            r.trials.to_string(),
            fmt_real(r.failure_rate()),
        ])?;
    }
    Ok(t)
}

pub fn basin_table(result: &BasinResult) -> Result<CsvTable> {
    let mut t = CsvTable::new(["tau", "a", "c1", "u0", "v0", "outcome"]);
    for p in &result.points {
        t.push(vec![
            fmt_real(result.tau),
            fmt_real(result.a),
            fmt_real(result.c1),
            fmt_real(p.u0),
            fmt_real(p.v0),
            p.outcome.label().to_string(),
        ])?;
    }
    Ok(t)
}

/// Long format: one row per (method, evaluation).
pub fn compare_table(histories: &[MethodHistory]) -> Result<CsvTable> {
    let mut t = CsvTable::new(["method", "c1", "evaluation", "f"]);
    for h in histories {
        for (i, f) in h.values.iter().enumerate() {
            t.push(vec![
                h.preset.label().to_string(),
                fmt_real(h.c1),
                (i + 1).to_string(),
                fmt_real(*f),
            ])?;
        }
    }
    Ok(t)
}

pub fn cap_table(rows: &[CapRow]) -> Result<CsvTable> {
    let mut t = CsvTable::new([
        "max_bisections",
        "a",
        "c1",
        "tau",
        "failures",
        "trials",
        "failure_rate",
    ]);
    for c in rows {
        t.push(vec![
            c.max_bisections.to_string(),
            fmt_real(c.row.a),
            fmt_real(c.row.c1),
            fmt_real(c.row.tau),
            c.row.failures.to_string(),
            c.row.trials.to_string(),
            fmt_real(c.row.failure_rate()),
        ])?;
    }
    Ok(t)
}

pub fn verify_table(reports: &[VerifyReport]) -> Result<CsvTable> {
    let mut t = CsvTable::new(["suite", "runs", "checks", "violations", "skipped"]);
    for r in reports {
        t.push(vec![
            r.suite.name().to_string(),
            r.runs.to_string(),
            r.checks.to_string(),
            r.violations.to_string(),
            r.skipped.to_string(),
        ])?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linesearch::LineSearchConfig;
    use crate::methods::{run_gradient_method, StopRule};
    use crate::objective::ObjectiveSpec;

    #[test]
    fn trajectory_rows_match_records() {
        let spec = ObjectiveSpec::abs_plus_linear(2.0, 2).unwrap();
        let trace = run_gradient_method(
            &spec,
            &[5.0, 1.0],
            &LineSearchConfig::default(),
            &StopRule::iterations(3),
        )
        .unwrap();
        let t = trajectory_table(&trace).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.rows()[0][4].parse::<f64>().unwrap(), 4.0);
        assert_eq!(t.rows()[0][6], "accepted");
        assert_eq!(t.rows()[3][4], "");
        assert_eq!(t.rows()[3][6], "final");
    }
}
