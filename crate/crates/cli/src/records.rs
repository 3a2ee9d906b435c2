//! Sweep CSV schema: writer and validating reader.

use std::io::{Read, Write};

use regulation_game::sweep::{Class, SweepRecord};

use crate::error::CliError;
use crate::format::num;

pub const HEADER: [&str; 13] = [
    "theta_g",
    "theta_d",
    "delta",
    "abstain",
    "alpha0",
    "beta0",
    "alpha1",
    "beta1",
    "u_g",
    "u_d",
    "class",
    "backfire",
    "mutualism",
];

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub theta_g: f64,
    pub theta_d: f64,
    pub delta: f64,
    pub abstain: bool,
    pub alpha0: f64,
    pub beta0: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub u_g: f64,
    pub u_d: f64,
    pub class: Class,
    pub backfire: bool,
    pub mutualism: bool,
}

fn fields(r: &SweepRecord) -> [String; 13] {
    let o = &r.outcome;
    [
        num(r.regulation.theta_g),
        num(r.regulation.theta_d),
        num(r.delta),
        o.abstained.to_string(),
        num(o.gamma0.alpha),
        num(o.gamma0.beta),
        num(o.gamma1.alpha),
        num(o.gamma1.beta),
        num(o.u_g),
        num(o.u_d),
        r.classification.as_str().to_string(),
        r.flags.backfire.to_string(),
        r.flags.mutualism.to_string(),
    ]
}

pub fn write_records<W: Write>(out: W, records: &[SweepRecord]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record(fields(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_bytes(records: &[SweepRecord]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to memory cannot fail");
    buf
}

/// Parses a sweep CSV. Columns may appear in any order; extra columns are
/// ignored. A missing column or a header-only file is a usage error.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<Row>, CliError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Usage(format!("bad CSV header: {e}")))?
        .clone();
    let mut idx = [0usize; 13];
    for (k, name) in HEADER.iter().enumerate() {
        idx[k] = headers.iter().position(|h| h == *name).ok_or_else(|| {
            CliError::Usage(format!("CSV schema mismatch: missing column {name}"))
        })?;
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Usage(format!("bad CSV row: {e}")))?;
        let at = |k: usize| rec.get(idx[k]).unwrap_or("");
        let bad = |k: usize| {
            CliError::Usage(format!(
                "row {}: bad value {:?} in column {}",
                line + 1,
                at(k),
                HEADER[k]
            ))
        };
        let f = |k: usize| at(k).parse::<f64>().map_err(|_| bad(k));
        let b = |k: usize| at(k).parse::<bool>().map_err(|_| bad(k));
        rows.push(Row {
            theta_g: f(0)?,
            theta_d: f(1)?,
            delta: f(2)?,
            abstain: b(3)?,
            alpha0: f(4)?,
            beta0: f(5)?,
            alpha1: f(6)?,
            beta1: f(7)?,
            u_g: f(8)?,
            u_d: f(9)?,
            class: Class::parse(at(10)).ok_or_else(|| bad(10))?,
            backfire: b(11)?,
            mutualism: b(12)?,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Usage("no data rows".into()));
    }
    Ok(rows)
}
