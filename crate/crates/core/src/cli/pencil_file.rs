use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::ncpoly::LinearPencil;
use crate::scalar::{scalar_from_json, ExactScalar};

/// JSON form of a linear pencil:
/// `{n_vars, rows, cols, coeffs: {"A0": [[..],..], "A1": ..}}`.
///
/// Scalars are strings such as `"1/2-3i"` or plain JSON numbers.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PencilFile {
    pub n_vars: usize,
    pub rows: usize,
    pub cols: usize,
    pub coeffs: BTreeMap<String, Vec<Vec<ExactScalar>>>,
}

fn key(k: usize) -> String {
    format!("A{k}")
}

impl PencilFile {
    pub fn from_pencil(p: &LinearPencil) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, m)| (key(k), (0..m.nrows()).map(|i| m.row_vec(i)).collect()))
            .collect();
        Self {
            n_vars: p.n_vars(),
            rows: p.nrows(),
            cols: p.ncols(),
            coeffs,
        }
    }

    pub fn to_pencil(&self) -> Result<LinearPencil> {
        let mats = (0..=self.n_vars)
            .map(|k| {
                let rows = self.coeffs.get(&key(k)).ok_or_else(|| path_err(&format!("$.coeffs.A{k}"), "missing"))?;
                ExactMatrix::from_rows(rows.clone())
            })
            .collect::<Result<Vec<_>>>()?;
        LinearPencil::new(mats)
    }

    /// Parses a JSON document, reporting the JSON path of the first problem.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| path_err("$", "expected an object"))?;
        let uint = |name: &str| -> Result<usize> {
            obj.get(name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| path_err(&format!("$.{name}"), "expected a non-negative integer"))
        };
        let n_vars = uint("n_vars")?;
        let rows = uint("rows")?;
        let cols = uint("cols")?;
        if rows == 0 || cols == 0 {
            return Err(path_err("$.rows", "rows and cols must be positive"));
        }
        let coeffs_v = obj
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| path_err("$.coeffs", "expected an object"))?;
        for k in coeffs_v.keys() {
            let ok = k.strip_prefix('A').and_then(|s| s.parse::<usize>().ok()).is_some_and(|i| i <= n_vars);
            if !ok {
                return Err(path_err(&format!("$.coeffs.{k}"), "unexpected coefficient name"));
            }
        }
        let mut coeffs = BTreeMap::new();
        for k in 0..=n_vars {
            let name = key(k);
            let path = format!("$.coeffs.{name}");
            let m = coeffs_v.get(&name).ok_or_else(|| path_err(&path, "missing coefficient matrix"))?;
            let m = m.as_array().ok_or_else(|| path_err(&path, "expected an array of rows"))?;
            if m.len() != rows {
                return Err(path_err(&path, &format!("expected {rows} rows, found {}", m.len())));
            }
            let mut parsed = Vec::with_capacity(rows);
            for (i, row) in m.iter().enumerate() {
                let rpath = format!("{path}[{i}]");
                let row = row.as_array().ok_or_else(|| path_err(&rpath, "expected an array"))?;
                if row.len() != cols {
                    return Err(path_err(&rpath, &format!("expected {cols} entries, found {}", row.len())));
                }
                let entries = row
                    .iter()
                    .enumerate()
                    .map(|(j, x)| scalar_from_json(x).map_err(|e| path_err(&format!("{rpath}[{j}]"), &e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                parsed.push(entries);
            }
            coeffs.insert(name, parsed);
        }
        Ok(Self { n_vars, rows, cols, coeffs })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| path_err("$", &e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn read(path: &Path) -> Result<LinearPencil> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
            .and_then(|f| f.to_pencil())
            .map_err(|e| match e {
                Error::PencilFile { path: p, message } => Error::PencilFile {
                    path: format!("{}: {p}", path.display()),
                    message,
                },
                other => other,
            })
    }
}

fn path_err(path: &str, message: &str) -> Error {
    Error::PencilFile {
        path: path.to_string(),
        message: message.to_string(),
    }
}
