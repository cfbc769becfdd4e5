//! Per-epoch CSV traces.
//!
//! Columns are `epoch, cost, grad_norm` followed by `exact_<s>, est_<s>, dev_<s>`
//! for each series `s`. Reals are written with 17 significant digits so a
//! rerun with the same seed reproduces the file byte for byte.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// One quantity series of a trace.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesColumn {
    pub label: String,
    pub exact: f64,
    pub estimates: Vec<f64>,
}

/// In-memory form of a trace file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceTable {
    pub epochs: Vec<usize>,
    pub cost: Vec<f64>,
    pub grad_norm: Vec<f64>,
    pub series: Vec<SeriesColumn>,
}

/// 17 significant digits in scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl TraceTable {
    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["epoch".to_string(), "cost".into(), "grad_norm".into()];
        for s in &self.series {
            header.extend([format!("exact_{}", s.label), format!("est_{}", s.label), format!("dev_{}", s.label)]);
        }
        w.write_record(&header)?;
        for row in 0..self.len() {
            let mut record = vec![
                self.epochs[row].to_string(),
                format_real(self.cost[row]),
                format_real(self.grad_norm[row]),
            ];
            for s in &self.series {
                let est = s.estimates[row];
                record.extend([format_real(s.exact), format_real(est), format_real((est - s.exact).abs())]);
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        if header.len() < 3 || header[..3] != ["epoch", "cost", "grad_norm"] || (header.len() - 3) % 3 != 0 {
            return Err(Error::Trace("header must start with epoch,cost,grad_norm then triples".into()));
        }
        let mut table = TraceTable::default();
        for triple in header[3..].chunks(3) {
            let label = triple[0]
                .strip_prefix("exact_")
                .ok_or_else(|| Error::Trace(format!("expected exact_<name>, got '{}'", triple[0])))?;
            if triple[1] != format!("est_{label}") || triple[2] != format!("dev_{label}") {
                return Err(Error::Trace(format!("columns for '{label}' are out of order")));
            }
            table.series.push(SeriesColumn {
                label: label.to_string(),
                exact: f64::NAN,
                estimates: Vec::new(),
            });
        }
        for (row, record) in r.records().enumerate() {
            let record = record?;
            let num = |col: usize| -> Result<f64> {
                record[col]
                    .parse()
                    .map_err(|_| Error::Trace(format!("row {}: bad number '{}'", row + 1, &record[col])))
            };
            table.epochs.push(
                record[0]
                    .parse()
                    .map_err(|_| Error::Trace(format!("row {}: bad epoch '{}'", row + 1, &record[0])))?,
            );
            table.cost.push(num(1)?);
            table.grad_norm.push(num(2)?);
            for (k, s) in table.series.iter_mut().enumerate() {
                s.exact = num(3 + 3 * k)?;
                s.estimates.push(num(4 + 3 * k)?);
            }
        }
        Ok(table)
    }
}
