//! Matrix files: CSV rows with an optional `# rows cols` header, and Matrix
//! Market array files (`.mtx`, column-major).

use std::fs;
use std::path::{Path, PathBuf};

use eqkit_core::DenseMatrix;

use crate::error::CliError;

pub struct Loaded {
    pub matrix: DenseMatrix,
    pub sha256: String,
}

pub fn read_matrix(path: &Path) -> Result<Loaded, CliError> {
    use sha2::{Digest, Sha256};
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::parse(path, "file is not UTF-8"))?;
    let is_mtx = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("mtx"));
    let matrix = if is_mtx { parse_mtx(&text) } else { parse_csv(&text) }.map_err(|m| CliError::parse(path, m))?;
    Ok(Loaded { matrix, sha256 })
}

fn number(tok: &str, line: usize) -> Result<f64, String> {
    let t = tok.trim();
    let x: f64 = t.parse().map_err(|_| format!("line {line}: cannot parse {t:?} as a number"))?;
    if !x.is_finite() {
        return Err(format!("line {line}: non-finite value {t:?}"));
    }
    Ok(x)
}

fn dims(rest: &str, line: usize) -> Result<(usize, usize), String> {
    let v: Vec<&str> = rest.split_whitespace().collect();
    match v.as_slice() {
        [r, c] => match (r.parse(), c.parse()) {
            (Ok(r), Ok(c)) => Ok((r, c)),
            _ => Err(format!("line {line}: bad size line")),
        },
        _ => Err(format!("line {line}: expected two sizes")),
    }
}

pub fn parse_csv(text: &str) -> Result<DenseMatrix, String> {
    let mut header = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if rows.is_empty() && header.is_none() {
                header = Some(dims(rest, i + 1)?);
            }
            continue;
        }
        let row = line.split(',').map(|t| number(t, i + 1)).collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(format!("line {}: {} fields, expected {}", i + 1, row.len(), first.len()));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("no data rows".into());
    }
    if let Some((r, c)) = header {
        if (r, c) != (rows.len(), rows[0].len()) {
            return Err(format!("header says {r}x{c}, data is {}x{}", rows.len(), rows[0].len()));
        }
    }
    DenseMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn parse_mtx(text: &str) -> Result<DenseMatrix, String> {
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines.next().ok_or("empty file")?;
    let words: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err("line 1: missing %%MatrixMarket matrix banner".into());
    }
    if words[2] != "array" || words[3] != "real" || words[4] != "general" {
        return Err(format!(
            "line 1: only 'array real general' is supported, got '{} {} {}'",
            words[2], words[3], words[4]
        ));
    }
    let mut size = None;
    let mut values = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if size.is_none() {
            size = Some(dims(line, i + 1)?);
            continue;
        }
        for tok in line.split_whitespace() {
            values.push(number(tok, i + 1)?);
        }
    }
    let (r, c) = size.ok_or("missing size line")?;
    if values.len() != r * c {
        return Err(format!("expected {} values, found {}", r * c, values.len()));
    }
    if r == 0 || c == 0 {
        return Err("empty matrix".into());
    }
    Ok(DenseMatrix::from_fn(r, c, |i, j| values[j * r + i]))
}

/// CSV with a `# rows cols` header. `{}` prints the shortest decimal that
/// parses back to the same `f64`, so reading the file back is exact.
pub fn to_csv(m: &DenseMatrix) -> String {
    let mut out = format!("# {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes every file or none: on failure the files already written are
/// removed again.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<(), CliError> {
    let mut done: Vec<&Path> = Vec::new();
    for (path, body) in files {
        let res = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map_or(Ok(()), fs::create_dir_all)
            .and_then(|()| fs::write(path, body));
        if let Err(e) = res {
            for p in done {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::io(path, e));
        }
        done.push(path);
    }
    Ok(())
}
