//! Trial records and the fixed-schema CSV writer.
//!
//! Column order is part of the interface:
//! `experiment,N,L,K,M,snr_db,delta_f,method,trial,rmse,success,iters,solve_secs,ca_spread`.
//! Floating-point values carry 9 significant digits; a row's `success` flag
//! always equals `rmse <= 1e-4` recomputed from the serialized `rmse`.

use std::io::Write;

/// One CSV row: all configuration-point scalars plus one method's outcome
/// for one trial.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub experiment: &'static str,
    pub num_samples: usize,
    pub num_channels: usize,
    pub order: usize,
    pub num_observed: usize,
    /// `inf` for noiseless runs.
    pub snr_db: f64,
    /// Minimum wrapped separation of the true frequencies; `inf` for a
    /// single sinusoid.
    pub delta_f: f64,
    pub method: &'static str,
    pub trial: usize,
    pub rmse: f64,
    pub iters: usize,
    pub solve_secs: f64,
    /// Self-normalized per-component modulus spread (constant-amplitude
    /// fidelity diagnostic); `nan` when gains were not recoverable.
    pub ca_spread: f64,
}

/// 9 significant digits, scientific; `nan`/`inf` spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.8e}")
    }
}

/// The success flag recomputed from the serialized rmse, so that a CSV
/// consumer deriving `rmse <= 1e-4` always agrees with the column.
fn serialized_success(rmse: f64) -> bool {
    let round_tripped: f64 = format_float(rmse).parse().unwrap_or(f64::NAN);
    round_tripped <= 1e-4
}

pub const CSV_HEADER: &str =
    "experiment,N,L,K,M,snr_db,delta_f,method,trial,rmse,success,iters,solve_secs,ca_spread";

pub fn write_csv<W: Write>(
    mut out: W,
    records: &[TrialRecord],
    header_comment: Option<&str>,
) -> std::io::Result<()> {
    if let Some(comment) = header_comment {
        writeln!(out, "# {comment}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.experiment,
            r.num_samples,
            r.num_channels,
            r.order,
            r.num_observed,
            format_float(r.snr_db),
            format_float(r.delta_f),
            r.method,
            r.trial,
            format_float(r.rmse),
            if serialized_success(r.rmse) { 1 } else { 0 },
            r.iters,
            format_float(r.solve_secs),
            format_float(r.ca_spread),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(rmse: f64) -> TrialRecord {
        TrialRecord {
            experiment: "snr-sweep",
            num_samples: 11,
            num_channels: 20,
            order: 3,
            num_observed: 11,
            snr_db: 20.0,
            delta_f: 0.01,
            method: "saca",
            trial: 0,
            rmse,
            iters: 120,
            solve_secs: 0.25,
            ca_spread: 1e-3,
        }
    }

    #[test]
    fn schema_and_significant_digits() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[record(1.23456789012e-5)], None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row = lines.next().unwrap();
        assert_eq!(
            row,
            "snr-sweep,11,20,3,11,2.00000000e1,1.00000000e-2,saca,0,1.23456789e-5,1,120,2.50000000e-1,1.00000000e-3"
        );
    }

    #[test]
    fn success_matches_serialized_rmse() {
        for rmse in [0.0, 5e-5, 1e-4, 1.0000001e-4, 2e-4, f64::NAN] {
            let mut buf = Vec::new();
            write_csv(&mut buf, &[record(rmse)], None).unwrap();
            let text = String::from_utf8(buf).unwrap();
            let row = text.lines().nth(1).unwrap();
            let fields: Vec<&str> = row.split(',').collect();
            let parsed: f64 = fields[9].parse().unwrap_or(f64::NAN);
            let success: u32 = fields[10].parse().unwrap();
            assert_eq!(success == 1, parsed <= 1e-4, "rmse {rmse} row {row}");
        }
    }

    #[test]
    fn header_comment_is_optional() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[], Some("generated 2026-01-01T00:00:00Z")).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# generated"));
        let mut buf = Vec::new();
        write_csv(&mut buf, &[], None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("experiment,"));
    }
}
