//! Probe report CSV format.
//!
//! Header `variable_index,seed_bit,baseline,flipped_prediction,importance`,
//! one row per variable, `\n` line endings. Floats are written in
//! scientific notation with 17 significant digits, which round-trips
//! every finite double exactly, so emitting the same report twice yields
//! byte-identical files.

use crate::error::{Error, Result};
use crate::explain::{ProbeReport, ProbeRow};

pub const PROBE_HEADER: &str = "variable_index,seed_bit,baseline,flipped_prediction,importance";

/// Render a probe report as CSV text.
pub fn probe_csv_string(report: &ProbeReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows().len() + 1));
    out.push_str(PROBE_HEADER);
    out.push('\n');
    for r in report.rows() {
        out.push_str(&format!(
            "{},{},{:.16e},{:.16e},{:.16e}\n",
            r.index, r.seed_bit, r.baseline, r.flipped_prediction, r.importance
        ));
    }
    out
}

/// Parse CSV text produced by [`probe_csv_string`].
pub fn parse_probe_csv(text: &str) -> Result<ProbeReport> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == PROBE_HEADER => {}
        Some((_, header)) => {
            return Err(parse_err(1, format!("unexpected header {header:?}")));
        }
        None => return Err(parse_err(1, "empty input".into())),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(
                line_no,
                format!("expected 5 fields, got {}", fields.len()),
            ));
        }
        let index: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad variable index {:?}", fields[0])))?;
        let seed_bit: u8 = fields[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad seed bit {:?}", fields[1])))?;
        let mut nums = [0.0f64; 3];
        for (slot, field) in nums.iter_mut().zip(&fields[2..]) {
            *slot = field
                .trim()
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad number {field:?}")))?;
        }
        rows.push(ProbeRow {
            index,
            seed_bit,
            baseline: nums[0],
            flipped_prediction: nums[1],
            importance: nums[2],
        });
    }
    ProbeReport::from_rows(rows).map_err(|e| match e {
        Error::InvalidArgument(msg) => parse_err(1, msg),
        other => other,
    })
}

/// Render per-variable mean importance as CSV text.
pub fn mean_csv_string(values: &[f64]) -> Result<String> {
    if values.is_empty() {
        return Err(Error::invalid("mean importance CSV needs at least one value"));
    }
    let mut out = String::from("variable_index,mean_importance\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{i},{v:.16e}\n"));
    }
    Ok(out)
}
