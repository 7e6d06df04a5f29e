//! CSV and JSON forms of sampled functions, plus atomic file output.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::{Grid, SampledFunction};

#[derive(Serialize, Deserialize)]
struct SampledJson {
    grid: Grid,
    values: Vec<Option<f64>>,
    excluded: Vec<usize>,
}

impl Serialize for SampledFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SampledJson {
            grid: *self.grid(),
            values: (0..self.len()).map(|i| self.value(i)).collect(),
            excluded: self.excluded().iter().copied().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SampledFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SampledJson::deserialize(d)?;
        let mut excluded = raw.excluded;
        let values = raw
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.unwrap_or_else(|| {
                    excluded.push(i);
                    f64::NAN
                })
            })
            .collect();
        SampledFunction::new(raw.grid, values, excluded).map_err(serde::de::Error::custom)
    }
}

/// Writes `x,value` rows for the defined nodes, plus an optional constant
/// third column.
pub fn write_csv<W: Write>(f: &SampledFunction, extra: Option<(&str, &str)>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    match extra {
        Some((name, _)) => w.write_record(["x", "value", name]).map_err(csv_err)?,
        None => w.write_record(["x", "value"]).map_err(csv_err)?,
    }
    let grid = f.grid();
    for (i, v) in f.defined() {
        let x = grid.node(i).to_string();
        let v = v.to_string();
        match extra {
            Some((_, val)) => w.write_record([x.as_str(), v.as_str(), val]).map_err(csv_err)?,
            None => w.write_record([x.as_str(), v.as_str()]).map_err(csv_err)?,
        }
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(f: &SampledFunction) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(f, None, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

/// Reads `x,value` rows onto `grid`; nodes without a row become excluded.
pub fn read_csv<R: Read>(grid: Grid, input: R) -> Result<SampledFunction> {
    let mut r = csv::Reader::from_reader(input);
    let mut values = vec![f64::NAN; grid.len()];
    let mut seen = vec![false; grid.len()];
    let h = grid.h();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |k: usize| -> Result<f64> {
            rec.get(k)
                .ok_or_else(|| Error::Parse(format!("row has no column {k}")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(e.to_string()))
        };
        let (x, v) = (field(0)?, field(1)?);
        let i = grid.nearest(x);
        if (grid.node(i) - x).abs() > 1e-6 * h {
            return Err(Error::Parse(format!("x = {x} is not a grid node")));
        }
        values[i] = v;
        seen[i] = true;
    }
    let excluded: Vec<usize> = (0..grid.len()).filter(|&i| !seen[i]).collect();
    SampledFunction::new(grid, values, excluded)
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name =
        path.file_name().ok_or_else(|| Error::Io(format!("not a file path: {}", path.display())))?.to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_keeps_exclusions() {
        let g = Grid::finite(0.0, 1.0, 8).unwrap();
        let f = SampledFunction::from_fn(g, |x| x.powf(-0.5));
        assert!(f.is_excluded(0));
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"values\":[null,"));
        let back: SampledFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back.excluded(), f.excluded());
        for i in 1..=8 {
            assert_eq!(back.value(i), f.value(i));
        }
    }

    #[test]
    fn json_rejects_bad_grid() {
        let s = r#"{"grid":{"a":1.0,"b":0.0,"n":4,"kind":"FiniteInterval"},"values":[0,0,0,0,0],"excluded":[]}"#;
        assert!(serde_json::from_str::<SampledFunction>(s).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let g = Grid::finite(-1.0, 1.0, 10).unwrap();
        let f = SampledFunction::from_fn(g, |x| if x == 0.0 { f64::NAN } else { x * x });
        let text = to_csv_string(&f).unwrap();
        assert!(text.starts_with("x,value\n"));
        assert_eq!(text.lines().count(), 1 + 10);
        let back = read_csv(g, text.as_bytes()).unwrap();
        assert_eq!(back.excluded(), f.excluded());
        assert_eq!(back.values()[3], f.values()[3]);
    }
}
