use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::ConfigFile;
use super::sweep::SweepResult;
use crate::bounds::{BoundInterval, BoundReport};
use crate::error::{Error, Result};

pub const CSV_COLUMNS: [&str; 18] = [
    "snr_db",
    "bler_map",
    "bler_map_se",
    "bler_ml",
    "bler_ml_se",
    "rmse_map",
    "rmse_ml",
    "t1_lb",
    "t1_ub",
    "t2_lb",
    "t2_ub",
    "t3_lb",
    "t3_ub",
    "c1_lo",
    "c1_hi",
    "union_bound",
    "normal_approx",
    "diverged_trials",
];

pub const BOUND_COLUMNS: [&str; 11] = [
    "snr_db",
    "t1_lb",
    "t1_ub",
    "t2_lb",
    "t2_ub",
    "t3_lb",
    "t3_ub",
    "c1_lo",
    "c1_hi",
    "union_bound",
    "normal_approx",
];

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.display().to_string(), source }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn ends(b: Option<&BoundInterval>) -> [String; 2] {
    match b {
        Some(b) => [num(b.lo), num(b.hi)],
        None => [num(f64::NAN), num(f64::NAN)],
    }
}

fn bound_fields(r: &BoundReport) -> Vec<String> {
    let mut v = Vec::with_capacity(10);
    v.extend(ends(Some(&r.theorem1)));
    v.extend(ends(r.theorem2.as_ref()));
    v.extend(ends(r.theorem3.as_ref()));
    v.extend(ends(r.corollary1.as_ref()));
    v.push(num(r.union_bound));
    v.push(num(r.normal_approx));
    v
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Full sweep CSV with the fixed column order of [`CSV_COLUMNS`]. Missing
/// values are written as `NaN`.
pub fn sweep_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let rows = result.rows.iter().map(|row| {
        let se = |a: Option<&super::TrialAccumulator>| a.map_or(f64::NAN, |a| a.bler_se());
        let mut v = vec![
            num(row.snr_db),
            num(row.bler_map()),
            num(se(row.map.as_ref())),
            num(row.bler_ml()),
            num(se(row.ml.as_ref())),
            num(row.rmse_map()),
            num(row.rmse_ml()),
        ];
        v.extend(bound_fields(&row.bounds));
        v.push(row.diverged().to_string());
        v
    });
    write_rows(path, &CSV_COLUMNS, rows)
}

pub fn bounds_csv(reports: &[BoundReport], path: &Path) -> Result<()> {
    let rows = reports.iter().map(|r| {
        let mut v = vec![num(r.snr_db)];
        v.extend(bound_fields(r));
        v
    });
    write_rows(path, &BOUND_COLUMNS, rows)
}

#[derive(Serialize)]
struct MetaRow {
    snr_db: f64,
    blocks_map: u64,
    blocks_ml: u64,
    undetected_errors: u64,
    diverged_trials: u64,
    empirical_p01_map: f64,
    theorem3_vacuous: bool,
}

#[derive(Serialize)]
struct Meta<'a> {
    config: &'a ConfigFile,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    results: Vec<MetaRow>,
}

/// Provenance sidecar: the resolved configuration and per-SNR counters that
/// do not fit the CSV schema.
pub fn write_meta(path: &Path, config: &ConfigFile, result: Option<&SweepResult>) -> Result<()> {
    let results = result
        .map(|r| {
            r.rows
                .iter()
                .map(|row| MetaRow {
                    snr_db: row.snr_db,
                    blocks_map: row.map.as_ref().map_or(0, |a| a.blocks),
                    blocks_ml: row.ml.as_ref().map_or(0, |a| a.blocks),
                    undetected_errors: row.undetected(),
                    diverged_trials: row.diverged(),
                    empirical_p01_map: row.map.as_ref().map_or(f64::NAN, |a| a.p01()),
                    theorem3_vacuous: row.bounds.theorem3_vacuous,
                })
                .collect()
        })
        .unwrap_or_default();
    let text = toml::to_string(&Meta { config, results })
        .map_err(|e| Error::Invalid(format!("cannot serialize run metadata: {e}")))?;
    let mut f = File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))?;
    Ok(())
}

/// A numeric CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_csv_table(path: &Path) -> Result<CsvTable> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rd = csv::Reader::from_reader(file);
    let headers: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, s)| {
                s.trim().parse::<f64>().map_err(|_| {
                    Error::Invalid(format!("{}: row {} column {}: `{s}` is not a number", path.display(), line + 2, j + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { headers, rows })
}

/// Joins tables on `snr_db` into whitespace-separated columns with a `#`
/// header line. With several tables every column is prefixed by its label.
pub fn merge_reports(tables: &[(String, CsvTable)]) -> Result<String> {
    let mut by_snr: BTreeMap<i64, f64> = BTreeMap::new();
    let mut header = vec!["snr_db".to_string()];
    let mut keyed: Vec<(usize, BTreeMap<i64, &Vec<f64>>)> = Vec::new();
    for (label, t) in tables {
        let s = t
            .headers
            .iter()
            .position(|h| h == "snr_db")
            .ok_or_else(|| Error::Invalid(format!("{label}: no snr_db column")))?;
        let mut map = BTreeMap::new();
        for row in &t.rows {
            let key = (row[s] * 1e6).round() as i64;
            by_snr.insert(key, row[s]);
            map.insert(key, row);
        }
        for (j, h) in t.headers.iter().enumerate() {
            if j != s {
                header.push(if tables.len() > 1 { format!("{label}:{h}") } else { h.clone() });
            }
        }
        keyed.push((s, map));
    }
    let mut out = format!("# {}\n", header.join(" "));
    for (key, snr) in &by_snr {
        let mut line = vec![num(*snr)];
        for ((s, map), (_, t)) in keyed.iter().zip(tables) {
            for j in 0..t.headers.len() {
                if j != *s {
                    line.push(num(map.get(key).map_or(f64::NAN, |row| row[j])));
                }
            }
        }
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_aligns_on_snr() {
        let a = CsvTable { headers: vec!["snr_db".into(), "x".into()], rows: vec![vec![0.0, 1.0], vec![1.0, 2.0]] };
        let b = CsvTable { headers: vec!["y".into(), "snr_db".into()], rows: vec![vec![5.0, 1.0]] };
        let text = merge_reports(&[("a".into(), a.clone()), ("b".into(), b)]).unwrap();
        assert_eq!(text, "# snr_db a:x b:y\n0 1 NaN\n1 2 5\n");
        let single = merge_reports(&[("a".into(), a)]).unwrap();
        assert!(single.starts_with("# snr_db x\n"));
    }

    #[test]
    fn csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        std::fs::write(&p, "snr_db,v\n0.5,NaN\n1,2e-3\n").unwrap();
        let t = read_csv_table(&p).unwrap();
        assert_eq!(t.headers, vec!["snr_db", "v"]);
        assert!(t.rows[0][1].is_nan());
        assert_eq!(t.column("v").unwrap()[1], 2e-3);
        std::fs::write(&p, "snr_db\nabc\n").unwrap();
        assert!(read_csv_table(&p).unwrap_err().to_string().contains("abc"));
    }
}
