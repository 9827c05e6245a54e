//! Graphon spec files, CSV matrices, PGM heatmaps and run metadata.

use std::io::{BufRead, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::builtin;
use crate::error::{Error, Result};
use crate::graphon::{Graphon, GridGraphon, StepGraphon};
use crate::partition::Partition;

/// Asymmetry accepted in spec files before averaging with the transpose.
pub const LOAD_SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GraphonSpec {
    Step {
        measures: Vec<f64>,
        blocks: Vec<Vec<f64>>,
    },
    Grid {
        resolution: usize,
        values: Vec<Vec<f64>>,
    },
    Builtin {
        name: BuiltinName,
        #[serde(default)]
        params: BuiltinParams,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinName {
    Bipartite,
    Er,
    CircularBand,
    OneMinusMax,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

fn matrix_from_rows(rows: &[Vec<f64>], n: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rows.len(),
        });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::invalid(format!(
            "{what} row has {} entries, expected {n}",
            bad.len()
        )));
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    for i in 0..n {
        for j in i + 1..n {
            let gap = (m[(i, j)] - m[(j, i)]).abs();
            if gap.is_nan() || gap > LOAD_SYMMETRY_TOLERANCE {
                return Err(Error::invalid(format!(
                    "{what} is not symmetric at ({i}, {j}): difference {gap:e}"
                )));
            }
        }
    }
    Ok((&m + m.transpose()) * 0.5)
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl GraphonSpec {
    /// Materializes the graphon; `grid` is the resolution used for analytic
    /// builtins that do not set their own.
    pub fn build(&self, grid: usize) -> Result<Graphon> {
        match self {
            GraphonSpec::Step { measures, blocks } => {
                let p = Partition::new(measures.clone())?;
                let m = matrix_from_rows(blocks, p.len(), "block matrix")?;
                Ok(StepGraphon::new(p, m)?.into())
            }
            GraphonSpec::Grid { resolution, values } => {
                if *resolution == 0 {
                    return Err(Error::invalid("grid resolution must be positive"));
                }
                let m = matrix_from_rows(values, *resolution, "grid")?;
                Ok(GridGraphon::new(m)?.into())
            }
            GraphonSpec::Builtin { name, params } => {
                let resolution = params.resolution.unwrap_or(grid);
                let need = |v: Option<f64>, key: &str| {
                    v.ok_or_else(|| Error::invalid(format!("builtin {name:?} needs params.{key}")))
                };
                Ok(match name {
                    BuiltinName::Bipartite => builtin::bipartite().into(),
                    BuiltinName::Er => {
                        let p = need(params.p, "p")?;
                        builtin::erdos_renyi(p)?.into()
                    }
                    BuiltinName::CircularBand => {
                        builtin::circular_band(need(params.tau, "tau")?, resolution)?.into()
                    }
                    BuiltinName::OneMinusMax => builtin::one_minus_max(resolution)?.into(),
                })
            }
        }
    }

    /// Explicit spec holding the graphon's values.
    pub fn from_graphon(w: &Graphon) -> Self {
        match w {
            Graphon::Step(s) => GraphonSpec::Step {
                measures: s.partition().measures().to_vec(),
                blocks: rows_of(s.blocks()),
            },
            Graphon::Grid(g) => GraphonSpec::Grid {
                resolution: g.resolution(),
                values: rows_of(g.values()),
            },
        }
    }
}

/// A parsed spec file together with the hash of its bytes.
#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub spec: GraphonSpec,
    pub sha256: String,
}

pub fn parse_spec(bytes: &[u8]) -> Result<LoadedSpec> {
    let spec = serde_json::from_slice(bytes)?;
    Ok(LoadedSpec {
        spec,
        sha256: sha256_hex(bytes),
    })
}

pub fn load_spec(path: &Path) -> Result<LoadedSpec> {
    parse_spec(&std::fs::read(path)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Header attached to every emitted artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_sha256: Option<String>,
    pub options: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl Metadata {
    pub fn new(
        command: impl Into<String>,
        input_sha256: Option<String>,
        options: serde_json::Value,
        reproducible: bool,
    ) -> Self {
        let timestamp = (!reproducible).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Metadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            input_sha256,
            options,
            timestamp,
        }
    }

    fn comment_lines(&self) -> Result<String> {
        Ok(format!("# {}\n", serde_json::to_string(self)?))
    }
}

/// Writes a labelled table as CSV, preceded by a `#` metadata line.
pub fn write_csv<W: Write>(
    mut out: W,
    meta: Option<&Metadata>,
    corner: &str,
    labels: &[String],
    rows: &[Vec<String>],
) -> Result<()> {
    if let Some(meta) = meta {
        out.write_all(meta.comment_lines()?.as_bytes())?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once(corner).chain(labels.iter().map(String::as_str)))?;
    for (label, row) in labels.iter().zip(rows) {
        w.write_record(std::iter::once(label.as_str()).chain(row.iter().map(String::as_str)))?;
    }
    w.flush()?;
    Ok(())
}

/// Square numeric matrix with row and column labels.
pub fn write_matrix_csv<W: Write>(
    out: W,
    meta: Option<&Metadata>,
    labels: &[String],
    m: &DMatrix<f64>,
) -> Result<()> {
    let rows: Vec<Vec<String>> = m
        .row_iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();
    write_csv(out, meta, "index", labels, &rows)
}

/// Reads a table written by [`write_matrix_csv`], skipping `#` lines and
/// the label column.
pub fn read_matrix_csv<R: BufRead>(input: R) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .skip(1)
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| Error::invalid(format!("bad CSV number `{s}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::invalid("CSV matrix is not square"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Plain (P2) greymap; `levels` are row-major with values in `0..=maxval`.
pub fn write_pgm<W: Write>(
    mut out: W,
    comment: Option<&str>,
    width: usize,
    height: usize,
    maxval: u32,
    levels: &[u32],
) -> Result<()> {
    if levels.len() != width * height {
        return Err(Error::DimensionMismatch {
            expected: width * height,
            found: levels.len(),
        });
    }
    writeln!(out, "P2")?;
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    writeln!(out, "{width} {height}")?;
    writeln!(out, "{}", maxval.max(1))?;
    for row in levels.chunks(width.max(1)) {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_spec_round_trip() {
        let json = r#"{"kind":"step","measures":[0.25,0.75],"blocks":[[0.1,0.3],[0.3,0.9]]}"#;
        let loaded = parse_spec(json.as_bytes()).unwrap();
        assert_eq!(loaded.sha256.len(), 64);
        let w = loaded.spec.build(16).unwrap();
        let back = GraphonSpec::from_graphon(&w);
        assert_eq!(back, loaded.spec);
        let text = serde_json::to_string(&back).unwrap();
        assert_eq!(parse_spec(text.as_bytes()).unwrap().spec, back);
    }

    #[test]
    fn asymmetric_blocks_are_rejected() {
        let json = r#"{"kind":"step","measures":[0.5,0.5],"blocks":[[0,0.3],[0.2,0]]}"#;
        let spec = parse_spec(json.as_bytes()).unwrap().spec;
        assert!(matches!(spec.build(8), Err(Error::Invalid(_))));
        let nearly = r#"{"kind":"step","measures":[0.5,0.5],"blocks":[[0,0.3],[0.3000000001,0]]}"#;
        let w = parse_spec(nearly.as_bytes())
            .unwrap()
            .spec
            .build(8)
            .unwrap();
        assert_eq!(w.values()[(0, 1)], w.values()[(1, 0)]);
    }

    #[test]
    fn builtins() {
        let band = r#"{"kind":"builtin","name":"circular_band","params":{"tau":0.25}}"#;
        let w = parse_spec(band.as_bytes()).unwrap().spec.build(40).unwrap();
        assert!(w.is_grid());
        assert_eq!(w.values().nrows(), 40);
        let er = r#"{"kind":"builtin","name":"er"}"#;
        assert!(parse_spec(er.as_bytes()).unwrap().spec.build(8).is_err());
        let unknown = r#"{"kind":"builtin","name":"er","params":{"q":1}}"#;
        assert!(matches!(
            parse_spec(unknown.as_bytes()),
            Err(Error::Json(_))
        ));
    }

    #[test]
    fn csv_round_trip() {
        let m = DMatrix::from_row_slice(2, 2, &[0.1, 1.0 / 3.0, 1.0 / 3.0, 2e-17]);
        let meta = Metadata::new("test", None, serde_json::json!({}), true);
        let labels = vec!["0".to_string(), "1".to_string()];
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, Some(&meta), &labels, &m).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# {"));
        assert!(!text.contains("timestamp"));
        assert_eq!(read_matrix_csv(&buf[..]).unwrap(), m);
    }

    #[test]
    fn pgm_layout() {
        let mut buf = Vec::new();
        write_pgm(&mut buf, Some("levels"), 2, 2, 3, &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "P2\n# levels\n2 2\n3\n0 1\n2 3\n"
        );
        assert!(write_pgm(Vec::new(), None, 2, 2, 3, &[0]).is_err());
    }
}
