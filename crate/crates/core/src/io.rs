//! Output files: a JSON header line followed by CSV or JSON-lines records.
//!
//! Reals are written with 17 significant digits so every `f64` round-trips.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ensemble::{EnsembleSummary, ReplicaRecord};
use crate::error::Result;
use crate::process::{DegreeSequence, EdgeTracePoint};
use crate::theory::TheoryTable;

pub const TOOL_NAME: &str = "parid";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `x` with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Fields that vary between otherwise identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuntimeInfo {
    pub timestamp_unix: u64,
    pub threads: usize,
}

impl RuntimeInfo {
    pub fn now(threads: usize) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            timestamp_unix,
            threads,
        }
    }
}

/// First line of every output file. Everything except `runtime` is a pure
/// function of the invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub seeds: Value,
    pub runtime: RuntimeInfo,
}

impl Header {
    pub fn new(command: &str, config: Value, seeds: Value, threads: usize) -> Self {
        Self {
            tool: TOOL_NAME.to_owned(),
            version: TOOL_VERSION.to_owned(),
            command: command.to_owned(),
            config,
            seeds,
            runtime: RuntimeInfo::now(threads),
        }
    }
}

/// Opens `path` for writing, creating parent directories.
pub fn create_output(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_header<W: Write>(w: &mut W, header: &Header) -> Result<()> {
    serde_json::to_writer(&mut *w, header)?;
    writeln!(w)?;
    Ok(())
}

/// `k,R_k,r_k,Q_k` for `k = 1..=k_max`, then `k = -1` for the overflow bucket
/// (its `Q` is the vertex count).
pub fn write_degree_sequence_csv<W: Write>(w: &mut W, seq: &DegreeSequence) -> Result<()> {
    writeln!(w, "k,R_k,r_k,Q_k")?;
    for (k, r, p, q) in seq.rows() {
        writeln!(w, "{k},{r},{},{q}", format_real(p))?;
    }
    writeln!(
        w,
        "-1,{},{},{}",
        seq.overflow,
        format_real(seq.overflow_proportion()),
        seq.vertices()
    )?;
    Ok(())
}

pub fn write_edge_trace_csv<W: Write>(w: &mut W, trace: &[EdgeTracePoint]) -> Result<()> {
    writeln!(w, "tau,L_tau")?;
    for p in trace {
        writeln!(w, "{},{}", p.tau, p.edges)?;
    }
    Ok(())
}

/// `k,b_k,b_k_prime,residual`; the last two columns are empty without a horizon.
pub fn write_theory_table_csv<W: Write>(w: &mut W, table: &TheoryTable) -> Result<()> {
    writeln!(w, "k,b_k,b_k_prime,residual")?;
    for (i, b) in table.b_k.iter().enumerate() {
        let bp = table.b_k_prime.get(i).map(|&x| format_real(x)).unwrap_or_default();
        let res = table.residual.get(i).map(|&x| format_real(x)).unwrap_or_default();
        writeln!(w, "{},{},{bp},{res}", i + 1, format_real(*b))?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(w: &mut W, summary: &EnsembleSummary) -> Result<()> {
    writeln!(w, "tau,k,mean,std,min,q5,median,q95,max")?;
    for c in &summary.cells {
        let reals = [c.mean, c.std, c.min, c.q5, c.median, c.q95, c.max].map(format_real);
        writeln!(w, "{},{},{}", c.tau, c.k, reals.join(","))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ProportionRecord {
    replica: usize,
    tau: u64,
    k: u64,
    r_k: f64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct EdgeRecord {
    replica: usize,
    tau: u64,
    L: u64,
}

/// One `{replica, tau, k, r_k}` line per tracked `k` and one
/// `{replica, tau, L}` line per checkpoint.
pub fn write_raw_records_jsonl<W: Write>(w: &mut W, records: &[ReplicaRecord], tracked_k: &[u64]) -> Result<()> {
    for rec in records {
        for p in &rec.points {
            for (&k, &r_k) in tracked_k.iter().zip(&p.r) {
                let line = ProportionRecord {
                    replica: rec.replica,
                    tau: p.tau,
                    k,
                    r_k,
                };
                serde_json::to_writer(&mut *w, &line)?;
                writeln!(w)?;
            }
            let line = EdgeRecord {
                replica: rec.replica,
                tau: p.tau,
                L: p.edges,
            };
            serde_json::to_writer(&mut *w, &line)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// One JSON object per line.
pub fn write_jsonl<W: Write, T: Serialize>(w: &mut W, items: &[T]) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut *w, item)?;
        writeln!(w)?;
    }
    Ok(())
}
