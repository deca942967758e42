//! Report emission: JSON with a provenance block, or a CSV projection.

use std::fs::File;
use std::io::{self, Write};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::{Cli, Format};

/// A table projection of a report.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub seed: u64,
    pub samples: u64,
    pub generator: &'static str,
    pub tol_rh: f64,
    pub tol_id: f64,
    pub workers: Option<usize>,
    pub parallel: bool,
}

pub fn provenance(cli: &Cli, argv: &[String]) -> Provenance {
    Provenance {
        tool: "shortvar",
        version: env!("CARGO_PKG_VERSION"),
        command: argv.iter().skip(1).cloned().collect(),
        seed: cli.global.seed,
        samples: cli.global.samples,
        generator: shortvar::rmt::GENERATOR,
        tol_rh: cli.global.tol_rh,
        tol_id: cli.global.tol_id,
        workers: cli.global.workers,
        parallel: cfg!(feature = "parallel"),
    }
}

/// Report fields at top level plus "provenance".
pub fn envelope(report: Value, prov: &Provenance) -> Value {
    let mut obj = match report {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert("provenance".into(), json!(prov));
    Value::Object(obj)
}

fn sink(cli: &Cli) -> Result<Box<dyn Write>> {
    Ok(match &cli.global.out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot write {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn emit(cli: &Cli, doc: &Value, table: Option<&Table>) -> Result<()> {
    match cli.global.format {
        Format::Json => {
            let mut w = sink(cli)?;
            serde_json::to_writer_pretty(&mut w, doc)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let t = table
                .ok_or_else(|| crate::commands::UsageError("CSV output is not available for this command".into()))?;
            let w = sink(cli)?;
            let mut c = csv::Writer::from_writer(w);
            c.write_record(&t.headers)?;
            for r in &t.rows {
                c.write_record(r)?;
            }
            c.flush()?;
        }
    }
    Ok(())
}
