//! Report serialization: JSON lines (one report per line) and a CSV
//! summary. Float formatting goes through the shortest round-trip
//! representation, so identical runs produce byte-identical files.

use super::ResidualReport;
use crate::error::Result;
use std::fmt::Write as _;
use std::path::Path;

pub fn write_jsonl(reports: &[ResidualReport], path: &Path) -> Result<()> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_csv_summary(reports: &[ResidualReport], path: &Path) -> Result<()> {
    let mut out =
        String::from("check_id,points,abs_residual,rel_residual,tolerance,passed,quadrature_order\n");
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.check_id,
            r.points.len(),
            r.abs_residual,
            r.rel_residual,
            r.tolerance,
            r.passed,
            r.quadrature_order
        )
        .expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// One human-readable line per report.
pub fn render_summary(reports: &[ResidualReport]) -> String {
    let mut out = String::new();
    for r in reports {
        writeln!(
            out,
            "{} {:24} rel={:.3e} abs={:.3e} tol={:.1e} (n={})",
            if r.passed { "PASS" } else { "FAIL" },
            r.check_id,
            r.rel_residual,
            r.abs_residual,
            r.tolerance,
            r.quadrature_order
        )
        .expect("string write");
    }
    out
}
