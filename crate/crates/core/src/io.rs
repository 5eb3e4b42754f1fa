//! CSV ingestion of directional samples.
//!
//! One observation per row: a single angle for circle data, or `x,y,z` for sphere data
//! (normalized on load). An optional header row is detected by failing to parse as
//! numbers. Angles are radians unless `degrees` is set.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{Direction, Space};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub space: Space,
    pub points: Vec<Direction>,
}

pub fn read_sample<R: Read>(reader: R, degrees: bool) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut width: Option<usize> = None;
    let mut points = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Input(format!("row {}: {e}", row + 1)))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if row == 0 => continue,
            Err(e) => return Err(Error::Input(format!("row {}: {e}", row + 1))),
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input(format!("row {}: non-finite value", row + 1)));
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(Error::Input(format!(
                    "row {}: expected {w} columns, found {}",
                    row + 1,
                    values.len()
                )))
            }
            _ => {}
        }
        let point = match values.as_slice() {
            [t] => Direction::circle(if degrees { t.to_radians() } else { *t }),
            [x, y, z] => Direction::sphere([*x, *y, *z])
                .map_err(|e| Error::Input(format!("row {}: {e}", row + 1)))?,
            other => {
                return Err(Error::Input(format!(
                    "row {}: expected 1 or 3 columns, found {}",
                    row + 1,
                    other.len()
                )))
            }
        };
        points.push(point);
    }
    let space = match width {
        Some(1) => Space::Circle,
        Some(3) => Space::Sphere,
        _ => return Err(Error::EmptySample),
    };
    Ok(Sample { space, points })
}

pub fn read_sample_file<P: AsRef<Path>>(path: P, degrees: bool) -> Result<Sample> {
    let path = path.as_ref();
    let file = File::open(path)
        .map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))?;
    read_sample(file, degrees)
}
