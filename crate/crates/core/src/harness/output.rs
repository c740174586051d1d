use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Steps(u64),
    Real(f64),
}

/// One line of `samples.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub sample_id: u64,
    pub seed: u64,
    pub value: Value,
    pub normalized: f64,
    pub censored: bool,
}

pub const CSV_HEADER: [&str; 5] = ["sample_id", "seed", "value", "normalized", "censored"];

/// 17 significant digits, enough to reload the exact `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_value(v: Value) -> String {
    match v {
        Value::Steps(t) => t.to_string(),
        Value::Real(x) => format_real(x),
    }
}

pub fn render_csv(rows: &[Row]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let malformed = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(CSV_HEADER).map_err(malformed)?;
    for r in rows {
        w.write_record([
            r.sample_id.to_string(),
            r.seed.to_string(),
            format_value(r.value),
            format_real(r.normalized),
            r.censored.to_string(),
        ])
        .map_err(malformed)?;
    }
    w.into_inner()
        .map_err(|e| Error::Malformed(e.to_string()))
}

/// Parses `samples.csv`; the value column is kept as text.
pub fn parse_csv(bytes: &[u8]) -> Result<Vec<(u64, String)>> {
    let mut reader = csv::Reader::from_reader(bytes);
    let headers = reader
        .headers()
        .map_err(|e| Error::Malformed(e.to_string()))?
        .clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::Malformed(format!("unexpected CSV header {headers:?}")));
    }
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Malformed(e.to_string()))?;
            let id = rec[0]
                .parse()
                .map_err(|_| Error::Malformed(format!("bad sample id {:?}", &rec[0])))?;
            Ok((id, rec[2].to_string()))
        })
        .collect()
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_vec_pretty(value).map_err(|e| Error::Malformed(e.to_string()))?;
    text.push(b'\n');
    write_file(path, &text)
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    match std::fs::read(path) {
        Ok(b) => Ok(b),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(Error::MissingData(path.to_path_buf()))
        }
        Err(e) => Err(Error::io(path, e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::E * 1e-300, 12345.678] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = [
            Row { sample_id: 0, seed: 9, value: Value::Steps(12), normalized: 0.5, censored: false },
            Row { sample_id: 1, seed: 3, value: Value::Real(0.25), normalized: 1.0, censored: true },
        ];
        let bytes = render_csv(&rows).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("sample_id,seed,value,normalized,censored\n0,9,12,"));
        let parsed = parse_csv(&bytes).unwrap();
        assert_eq!(parsed[0], (0, "12".to_string()));
        assert_eq!(parsed[1].1.parse::<f64>().unwrap(), 0.25);
        assert!(parse_csv(b"a,b\n1,2\n").is_err());
    }
}
