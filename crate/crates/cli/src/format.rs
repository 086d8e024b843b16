//! Number formatting and report documents.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use rotkit::bench::{BenchConfig, BenchReport, Cell};
use serde::Serialize;

/// Shortest decimal that parses back to the same `f64` (at most 17 significant
/// digits); exponent form outside `[1e-5, 1e16)`.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn join(values: &[f64]) -> String {
    values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
}

#[derive(Debug, Serialize)]
pub struct Meta {
    pub seed: u64,
    pub suites: Vec<String>,
    pub config: BenchConfig,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub machine: String,
}

impl Meta {
    pub fn new(config: &BenchConfig, suites: Vec<String>) -> Self {
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
        Self {
            seed: config.seed,
            suites,
            config: config.clone(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            machine: format!(
                "{} {}, {threads} hardware threads",
                std::env::consts::OS,
                std::env::consts::ARCH
            ),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportDocument<'a> {
    pub meta: Meta,
    pub rows: &'a [BenchReport],
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Text(s) => s.clone(),
        Cell::Count(n) => n.to_string(),
        Cell::Real(v) => num(*v),
        Cell::Flag(b) => b.to_string(),
        Cell::Absent => "NA".to_string(),
    }
}

pub fn write_csv(out: &mut dyn Write, rows: &[BenchReport]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BenchReport::FIELDS)?;
    for r in rows {
        w.write_record(r.cells().iter().map(cell_text))?;
    }
    w.flush()
}

pub fn write_json(out: &mut dyn Write, doc: &ReportDocument) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)
}

pub fn write_markdown(out: &mut dyn Write, doc: &ReportDocument) -> std::io::Result<()> {
    writeln!(
        out,
        "<!-- seed {} | suites {} | {} | unix time {} -->",
        doc.meta.seed,
        doc.meta.suites.join(","),
        doc.meta.machine,
        doc.meta.timestamp
    )?;
    writeln!(out, "| {} |", BenchReport::FIELDS.join(" | "))?;
    writeln!(out, "|{}", "---|".repeat(BenchReport::FIELDS.len()))?;
    for r in doc.rows {
        let cells: Vec<String> = r
            .cells()
            .iter()
            .map(|c| cell_text(c).replace('|', "\\|"))
            .collect();
        writeln!(out, "| {} |", cells.join(" | "))?;
    }
    Ok(())
}
