use std::fs::OpenOptions;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One simulated (λ, seed) point. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub lambda: f64,
    pub algorithm: String,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub seed: u64,
    pub horizon: u64,
    pub avg_total_backlog: f64,
    pub final_total_backlog: u64,
    pub backlog_slope: f64,
    pub stable: bool,
    pub control_overhead_fraction: Option<f64>,
}

pub const CSV_HEADER: &str = "lambda,algorithm,k,p,seed,horizon,avg_total_backlog,final_total_backlog,backlog_slope,stable,control_overhead_fraction";

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv { path: path.to_path_buf(), source }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn write_rows<W: std::io::Write>(writer: W, rows: &[MetricsRow], header: bool, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    if header {
        w.write_record(CSV_HEADER.split(',')).map_err(csv_err(path))?;
    }
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes `rows` to a fresh file at `path`, header first.
pub fn write_metrics(rows: &[MetricsRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    write_rows(file, rows, true, path)
}

/// Appends `rows`, writing the header only when the file is new or empty.
pub fn append_metrics(rows: &[MetricsRow], path: &Path) -> Result<()> {
    let file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err(path))?;
    let empty = file.metadata().map_err(io_err(path))?.len() == 0;
    write_rows(file, rows, empty, path)
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRow>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header: Vec<String> = r.headers().map_err(csv_err(path))?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            msg: format!("unexpected header `{}`", header.join(",")),
        });
    }
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(lambda: f64, algorithm: &str) -> MetricsRow {
        MetricsRow {
            lambda,
            algorithm: algorithm.into(),
            k: (algorithm == "aug").then_some(2),
            p: (algorithm == "aug").then_some(0.2),
            seed: 7,
            horizon: 1000,
            avg_total_backlog: 12.345678901234,
            final_total_backlog: 17,
            backlog_slope: -0.000123,
            stable: true,
            control_overhead_fraction: None,
        }
    }

    #[test]
    fn header_only_and_single_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        write_metrics(&[], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), format!("{CSV_HEADER}\n"));
        write_metrics(&[row(0.8, "mm")], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().nth(1).unwrap(), "0.8,mm,,,7,1000,12.345678901234,17,-0.000123,true,");
    }

    #[test]
    fn round_trip_and_append() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let rows = vec![row(0.8, "aug"), row(0.95, "mm")];
        write_metrics(&rows, &path).unwrap();
        assert_eq!(read_metrics(&path).unwrap(), rows);
        append_metrics(&rows[..1], &path).unwrap();
        let back = read_metrics(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[2], rows[0]);

        let fresh = dir.path().join("fresh.csv");
        append_metrics(&rows, &fresh).unwrap();
        assert_eq!(read_metrics(&fresh).unwrap(), rows);
    }

    #[test]
    fn io_errors_carry_path() {
        let err = write_metrics(&[], Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"), "{err}");
    }
}
