//! CSV emission and parsing for fidelity traces.
//!
//! One row per (protocol, sample time), decimal text with 17 significant
//! digits, rows grouped by protocol in run order with times ascending.  The
//! CSV is the single source of truth for plotting.

use std::io::Write;

use crate::error::{DdError, Result};
use crate::experiment::{FidelityTrace, TraceRecord};

pub const CSV_HEADER: &str = "protocol,seed,n_real,t_J,fe_mean,fe_stderr";

/// 17 significant digits, enough to round-trip any f64.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(out: &mut W, traces: &[FidelityTrace]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for trace in traces {
        for rec in &trace.records {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                trace.label,
                trace.seed,
                rec.n_real,
                fmt17(rec.t),
                fmt17(rec.fe_mean),
                fmt17(rec.fe_stderr)
            )?;
        }
    }
    Ok(())
}

pub fn render_csv(traces: &[FidelityTrace]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, traces).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv is ascii")
}

/// Parse a trace CSV back into traces (consecutive rows with the same
/// protocol label and seed form one trace).
pub fn parse_csv(text: &str) -> Result<Vec<FidelityTrace>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| DdError::Parse("empty csv".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(DdError::Parse(format!(
            "unexpected csv header {header:?}, want {CSV_HEADER:?}"
        )));
    }
    let mut traces: Vec<FidelityTrace> = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(DdError::Parse(format!(
                "line {}: expected 6 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let bad = |what: &str| DdError::Parse(format!("line {}: bad {what}", lineno + 1));
        let label = fields[0].to_string();
        let seed: u64 = fields[1].parse().map_err(|_| bad("seed"))?;
        let n_real: usize = fields[2].parse().map_err(|_| bad("n_real"))?;
        let t: f64 = fields[3].parse().map_err(|_| bad("t_J"))?;
        let fe_mean: f64 = fields[4].parse().map_err(|_| bad("fe_mean"))?;
        let fe_stderr: f64 = fields[5].parse().map_err(|_| bad("fe_stderr"))?;
        let rec = TraceRecord { t, fe_mean, fe_stderr, n_real };
        match traces.last_mut() {
            Some(last) if last.label == label && last.seed == seed => last.records.push(rec),
            _ => traces.push(FidelityTrace {
                label,
                seed,
                records: vec![rec],
                config_digest: String::new(),
                truncated: false,
            }),
        }
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_trace(label: &str, seed: u64) -> FidelityTrace {
        FidelityTrace {
            label: label.into(),
            seed,
            records: vec![
                TraceRecord { t: 0.4, fe_mean: 0.9876543210987654, fe_stderr: 0.001, n_real: 100 },
                TraceRecord { t: 0.8, fe_mean: 0.25, fe_stderr: 0.0, n_real: 100 },
            ],
            config_digest: "ab".into(),
            truncated: false,
        }
    }

    #[test]
    fn header_and_digits() {
        let csv = render_csv(&[sample_trace("pdd", 7)]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row = lines.next().unwrap();
        assert!(row.starts_with("pdd,7,100,4.0000000000000002e-1,"));
        assert!(row.contains("9.8765432109876539e-1"));
    }

    #[test]
    fn csv_round_trips_values_exactly() {
        let traces = vec![sample_trace("pdd", 7), sample_trace("nrd", 9)];
        let csv = render_csv(&traces);
        let back = parse_csv(&csv).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in traces.iter().zip(&back) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.seed, b.seed);
            for (ra, rb) in a.records.iter().zip(&b.records) {
                assert_eq!(ra.t.to_bits(), rb.t.to_bits());
                assert_eq!(ra.fe_mean.to_bits(), rb.fe_mean.to_bits());
                assert_eq!(ra.fe_stderr.to_bits(), rb.fe_stderr.to_bits());
                assert_eq!(ra.n_real, rb.n_real);
            }
        }
    }

    #[test]
    fn parse_rejects_malformed_csv() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("wrong,header\n").is_err());
        let bad_row = format!("{CSV_HEADER}\npdd,7,100,notanumber,0.5,0.0\n");
        assert!(parse_csv(&bad_row).is_err());
        let short_row = format!("{CSV_HEADER}\npdd,7,100\n");
        assert!(parse_csv(&short_row).is_err());
    }
}
