//! CSV and JSON export. CSV numbers use 17 significant digits; absent
//! values are empty cells.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::diagnostics::{BoundCheckReport, NormSeries, Quantity};
use crate::error::{LabError, Result};

/// Column-oriented table with a mandatory header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let wrap = |e: csv::Error| LabError::Format(format!("csv: {e}"));
        w.write_record(&self.header).map_err(wrap)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.map(fmt_num).unwrap_or_default())).map_err(wrap)?;
        }
        w.flush().map_err(|e| LabError::Format(format!("csv: {e}")))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| LabError::io(path, e))
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn label(x: f64) -> String {
    x.to_string()
}

/// Columns of a norm series in their fixed order: time, every `J_r`, every
/// `G_r_λ`, `norm_u`, `norm_Au`, `rad_est`, then one `shell_q` per shell
/// index seen anywhere in the series.
pub fn series_table(series: &NormSeries) -> Table {
    let mut header = vec!["time".to_string()];
    let mut cols: Vec<Quantity> = Vec::new();
    for (i, r) in series.r_list.iter().enumerate() {
        header.push(format!("J_{}", label(*r)));
        cols.push(Quantity::J(i));
    }
    for (i, r) in series.r_list.iter().enumerate() {
        for (l, lam) in series.lambda_list.iter().enumerate() {
            header.push(format!("G_{}_{}", label(*r), label(*lam)));
            cols.push(Quantity::G(i, l));
        }
    }
    header.extend(["norm_u", "norm_Au", "rad_est"].map(String::from));
    cols.extend([Quantity::L2, Quantity::H1, Quantity::Radius]);
    let mut shells: Vec<i32> = series.records.iter().flat_map(|r| r.shells.iter().map(|s| s.0)).collect();
    shells.sort_unstable();
    shells.dedup();
    header.extend(shells.iter().map(|q| format!("shell_{q}")));

    let columns: Vec<Vec<Option<f64>>> = cols.iter().map(|q| series.column(*q)).collect();
    let mut table = Table::new(header);
    for (m, rec) in series.records.iter().enumerate() {
        let mut row = vec![Some(rec.time)];
        row.extend(columns.iter().map(|c| c[m]));
        row.extend(
            shells
                .iter()
                .map(|q| rec.shells.iter().find(|s| s.0 == *q).map(|s| s.1)),
        );
        table.push(row);
    }
    table
}

/// Per-time table of a bound check: time, ratio and any auxiliary series.
pub fn report_table(report: &BoundCheckReport) -> Table {
    let aux = report.auxiliary.len() == report.times.len() && !report.auxiliary.is_empty();
    let mut header = vec!["time".to_string(), "ratio".to_string()];
    if aux {
        header.push("auxiliary".into());
    }
    let mut table = Table::new(header);
    for (m, (t, r)) in report.times.iter().zip(&report.ratios).enumerate() {
        let mut row = vec![Some(*t), Some(*r)];
        if aux {
            row.push(Some(report.auxiliary[m]));
        }
        table.push(row);
    }
    table
}

#[derive(Serialize)]
struct Document<'a, P: Serialize, D: Serialize> {
    parameters: &'a P,
    data: &'a D,
}

/// JSON with the full parameter set echoed next to the data.
pub fn to_json<P: Serialize, D: Serialize>(parameters: &P, data: &D) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document { parameters, data })
        .map_err(|e| LabError::Format(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn save_json<P: Serialize, D: Serialize>(path: &Path, parameters: &P, data: &D) -> Result<()> {
    std::fs::write(path, to_json(parameters, data)?).map_err(|e| LabError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{NormRecord, Provenance};

    fn series(records: Vec<NormRecord>) -> NormSeries {
        NormSeries {
            provenance: Provenance::Oracle,
            r_list: vec![0.0, 0.5],
            lambda_list: vec![0.25],
            records,
        }
    }

    #[test]
    fn empty_series_is_header_only() {
        let csv = series_table(&series(Vec::new())).to_csv_string();
        assert_eq!(csv, "time,J_0,J_0.5,G_0_0.25,G_0.5_0.25,norm_u,norm_Au,rad_est\n");
    }

    #[test]
    fn csv_and_json_agree_exactly() {
        let rec = NormRecord {
            time: 0.1,
            j: vec![Some(1.0 / 3.0), None],
            g: vec![vec![Some(std::f64::consts::PI)], vec![None]],
            shells: vec![(2, 1e-300), (3, 7.0)],
            l2: 2f64.sqrt(),
            h1: Some(1e17 / 3.0),
            rad_est: None,
        };
        let s = series(vec![rec.clone()]);
        let csv = series_table(&s).to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0].split(',').last(), Some("shell_3"));
        let cells: Vec<&str> = lines[1].split(',').collect();
        let parsed = |i: usize| cells[i].parse::<f64>().unwrap();
        let json: serde_json::Value = serde_json::from_str(&to_json(&"p", &s).unwrap()).unwrap();
        let r0 = &json["data"]["records"][0];
        assert_eq!(parsed(0), r0["time"].as_f64().unwrap());
        assert_eq!(parsed(1), r0["j"][0].as_f64().unwrap());
        assert_eq!(cells[2], "");
        assert_eq!(parsed(3), r0["g"][0][0].as_f64().unwrap());
        assert_eq!(parsed(5), r0["l2"].as_f64().unwrap());
        assert_eq!(parsed(6), r0["h1"].as_f64().unwrap());
        assert_eq!(cells[7], "");
        assert_eq!(parsed(8), 1e-300);
        assert_eq!(json["parameters"], "p");
    }
}
