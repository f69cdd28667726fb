//! Appendix reproduction rows and their CSV encoding.

use std::path::Path;

use serde::Serialize;

use rotor_core::examples::evaluate;
use rotor_core::measures::check_invariance;
use rotor_core::{build_default, ExampleId, Point, Result, TrajectoryOptions};

pub type TestFn = dyn Fn(Point) -> f64 + Sync;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub case: String,
    pub quantity: String,
    pub args: String,
    pub expected: Option<f64>,
    pub computed: f64,
    pub abs_err: Option<f64>,
    pub pass: bool,
}

impl Row {
    /// A row with no reference value.
    pub fn computed(case: String, quantity: &str, args: String, computed: f64) -> Row {
        Row { case, quantity: quantity.to_string(), args, expected: None, computed, abs_err: None, pass: true }
    }
}

/// 12 significant digits.
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    let e = v.abs().log10().floor() as i32;
    if (-4..12).contains(&e) {
        format!("{:.*}", (11 - e) as usize, v)
    } else {
        format!("{v:.11e}")
    }
}

/// 12 significant digits with trailing zeros dropped.
pub fn short(v: f64) -> String {
    let s = sig12(v);
    if s.contains('e') || !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn point_args(named: &[(&str, Point)]) -> String {
    named.iter().map(|(n, p)| format!("{n}=({};{})", short(p.x), short(p.y))).collect::<Vec<_>>().join(" ")
}

pub fn write(path: &Path, rows: &[Row]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["case", "quantity", "args", "expected", "computed", "abs_err", "pass"])?;
    for r in rows {
        let opt = |v: Option<f64>| v.map(sig12).unwrap_or_default();
        w.write_record([
            r.case.as_str(),
            r.quantity.as_str(),
            r.args.as_str(),
            &opt(r.expected),
            &sig12(r.computed),
            &opt(r.abs_err),
            if r.pass { "true" } else { "false" },
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Bounded test functions for invariance checks.
pub fn test_functions() -> Vec<Box<TestFn>> {
    vec![
        Box::new(|z: Point| z.x),
        Box::new(|z: Point| z.y),
        Box::new(|z: Point| (z.x * z.y).sin()),
        Box::new(|z: Point| (-z.norm() * z.norm()).exp()),
    ]
}

/// Samples per measure-invariance row.
pub const INVARIANCE_SAMPLES: usize = 4000;

/// Every oracle of every example, followed by one invariance row per example
/// measure, sorted by case id.
pub fn appendix_rows(opts: &TrajectoryOptions, seed: u64) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let phis = test_functions();
    let refs: Vec<&TestFn> = phis.iter().map(|b| b.as_ref()).collect();
    for id in ExampleId::ALL {
        let sys = build_default(id);
        for (i, entry) in sys.oracle_table.iter().enumerate() {
            let computed = evaluate(&sys, &entry.quantity, opts)?;
            let err = (computed - entry.expected).abs();
            rows.push(Row {
                case: format!("{}-{:03}", id.as_str(), i + 1),
                quantity: entry.quantity.name().to_string(),
                args: entry.quantity.args(),
                expected: Some(entry.expected),
                computed,
                abs_err: Some(err),
                pass: err <= entry.tol,
            });
        }
        let f = |z: Point| sys.map(z);
        for (j, m) in sys.measures.iter().enumerate() {
            let rep = check_invariance(m.as_ref(), &f, &refs, INVARIANCE_SAMPLES, seed.wrapping_add(j as u64))?;
            rows.push(Row {
                case: format!("{}-m{:02}", id.as_str(), j + 1),
                quantity: "invariance".to_string(),
                args: m.description(),
                expected: Some(0.0),
                computed: rep.max_discrepancy,
                abs_err: Some(rep.max_discrepancy),
                pass: rep.max_discrepancy <= 4.0 * rep.stderr + 1e-12,
            });
        }
    }
    rows.sort_by(|a, b| a.case.cmp(&b.case));
    Ok(rows)
}
