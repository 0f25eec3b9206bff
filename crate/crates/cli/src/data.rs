//! Flux-shift data files: `T_mK,flux_shift_uPhi0[,sigma_uPhi0]`.

use std::path::Path;

use donorspin_core::fit::{DataPoint, DataSet};

use crate::config::read_input;
use crate::error::{CliError, Result};
use crate::output::Table;
use crate::report::Input;

pub const HEADER: [&str; 2] = ["T_mK", "flux_shift_uPhi0"];
pub const HEADER_WITH_SIGMA: [&str; 3] = ["T_mK", "flux_shift_uPhi0", "sigma_uPhi0"];

pub fn read_dataset(path: &Path, reference_temperature_k: f64) -> Result<(DataSet, Input)> {
    let (text, input) = read_input(path)?;
    let data = parse_dataset(&text, &input.path, reference_temperature_k)?;
    Ok((data, input))
}

pub fn parse_dataset(text: &str, origin: &str, reference_temperature_k: f64) -> Result<DataSet> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Data {
            path: origin.to_string(),
            message: format!("cannot read header: {e}"),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let with_sigma = if header == HEADER {
        false
    } else if header == HEADER_WITH_SIGMA {
        true
    } else {
        return Err(CliError::Data {
            path: origin.to_string(),
            message: format!(
                "header must be `{}` or `{}`, found `{}`",
                HEADER.join(","),
                HEADER_WITH_SIGMA.join(","),
                header.join(",")
            ),
        });
    };
    let mut points = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 1;
        let bad = |message: String| CliError::DataRow {
            path: origin.to_string(),
            row,
            message,
        };
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != header.len() {
            return Err(bad(format!(
                "expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            let v: f64 = record[i]
                .parse()
                .map_err(|_| bad(format!("{}: '{}' is not a number", header[i], &record[i])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(format!("{}: value must be finite", header[i])))
            }
        };
        let t_mk = num(0)?;
        if t_mk <= 0.0 {
            return Err(bad("T_mK must be > 0".into()));
        }
        let sigma = if with_sigma {
            let s = num(2)?;
            if s <= 0.0 {
                return Err(bad("sigma_uPhi0 must be > 0".into()));
            }
            Some(s)
        } else {
            None
        };
        points.push(DataPoint {
            temperature_k: t_mk * 1e-3,
            value: num(1)?,
            sigma,
        });
    }
    DataSet::new(points, reference_temperature_k).map_err(|e| CliError::Data {
        path: origin.to_string(),
        message: e.to_string(),
    })
}

pub fn dataset_table(name: &str, data: &DataSet) -> Table {
    let columns: &[&str] = if data.has_sigma() {
        &HEADER_WITH_SIGMA
    } else {
        &HEADER
    };
    let mut t = Table::new(name, columns);
    for p in data.points() {
        let mut row = vec![(p.temperature_k * 1e3).into(), p.value.into()];
        if let Some(s) = p.sigma {
            row.push(s.into());
        }
        t.push(row);
    }
    t
}

/// Header and string cells of any CSV this tool emits.
pub fn read_csv(text: &str) -> std::result::Result<(Vec<String>, Vec<Vec<String>>), csv::Error> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_row_is_named() {
        let text = "T_mK,flux_shift_uPhi0\n30,1.5\n35,abc\n";
        let e = parse_dataset(text, "d.csv", 0.2).unwrap_err();
        assert!(matches!(e, CliError::DataRow { row: 2, .. }), "{e}");
        assert!(e.to_string().contains("row 2"));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let e = parse_dataset("T_K,flux\n0.03,1\n", "d.csv", 0.2).unwrap_err();
        assert!(e.to_string().contains("header"));
    }

    #[test]
    fn round_trip_with_sigma() {
        let text = "T_mK,flux_shift_uPhi0,sigma_uPhi0\n30,1.5,0.1\n40,-2,0.2\n";
        let d = parse_dataset(text, "d.csv", 0.2).unwrap();
        assert_eq!(dataset_table("x", &d).to_csv(), text);
    }
}
