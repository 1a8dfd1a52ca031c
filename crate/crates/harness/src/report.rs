//! Report serialization.
//!
//! CSV columns, in order: `case, m, n, d, seed, lhs, rhs, abs_err, rel_err,
//! pass`. The header is written even for an empty list. JSON is an array
//! of report objects with the same keys.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{io_err, HarnessError, Result};
use crate::formats::VerificationReport;

pub const CSV_HEADER: [&str; 10] = [
    "case", "m", "n", "d", "seed", "lhs", "rhs", "abs_err", "rel_err", "pass",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(HarnessError::Invalid(format!(
                "unknown report format `{other}`"
            ))),
        }
    }
}

pub fn write_json<W: Write>(out: W, reports: &[VerificationReport]) -> Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, reports)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv<W: Write>(out: W, reports: &[VerificationReport]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(
    out: W,
    reports: &[VerificationReport],
    format: ReportFormat,
) -> Result<()> {
    match format {
        ReportFormat::Json => write_json(out, reports),
        ReportFormat::Csv => write_csv(out, reports),
    }
}

pub fn emit_report(
    reports: &[VerificationReport],
    format: ReportFormat,
    path: &Path,
) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write_report(&mut out, reports, format)?;
    out.flush().map_err(io_err(path))
}

pub fn read_json_report(path: &Path) -> Result<Vec<VerificationReport>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_csv_report(path: &Path) -> Result<Vec<VerificationReport>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> VerificationReport {
        VerificationReport {
            case: "gap (1,1)".into(),
            m: 1,
            n: 1,
            d: 1,
            seed: 7,
            lhs: 6.0,
            rhs: 6.000000000000001,
            abs_err: 8.9e-16,
            rel_err: 1.5e-16,
            pass: true,
        }
    }

    #[test]
    fn empty_list_gives_header_only_csv() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "case,m,n,d,seed,lhs,rhs,abs_err,rel_err,pass\n"
        );
    }

    #[test]
    fn one_check_gives_one_ten_field_row() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[sample_report()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(lines[1].as_bytes());
        let rec = r.records().next().unwrap().unwrap();
        assert_eq!(rec.len(), 10);
        assert_eq!(&rec[0], "gap (1,1)");
        assert_eq!(&rec[9], "true");
    }

    #[test]
    fn json_text_round_trip() {
        let mut buf = Vec::new();
        write_json(&mut buf, &[sample_report()]).unwrap();
        let back: Vec<VerificationReport> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, vec![sample_report()]);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
