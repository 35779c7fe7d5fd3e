//! Text interchange formats.
//!
//! Matrix files (`.gmx`):
//!
//! ```text
//! GMX 1 <rows> <cols> <int|real>
//! <v00> <v01> ...
//! ...
//! ```
//!
//! Point files (`.pts`):
//!
//! ```text
//! PTS 1 <count> <D>
//! <x> <y>
//! ...
//! ```
//!
//! Reals are written with 17 significant digits, integers in plain decimal.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::grid::{GridMatrix, MatrixKind};
use crate::geometry::Point;
use crate::{Error, Result};

pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_matrix(m: &GridMatrix) -> String {
    let mut out = String::with_capacity(m.rows() * m.cols() * 4 + 32);
    let _ = writeln!(out, "GMX 1 {} {} {}", m.rows(), m.cols(), m.kind().as_str());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(' ');
            }
            let v = m.get(i, j);
            match m.kind() {
                MatrixKind::Int => {
                    let _ = write!(out, "{}", v as i64);
                }
                MatrixKind::Real => out.push_str(&format_real(v)),
            }
        }
        out.push('\n');
    }
    out
}

/// Parses `.gmx` text. `origin` only labels error messages.
pub fn parse_matrix(text: &str, origin: &str) -> Result<GridMatrix> {
    let err = |line: usize, msg: String| Error::Parse {
        path: origin.to_string(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "GMX" || fields[1] != "1" {
        return Err(err(1, format!("bad header {header:?}")));
    }
    let rows: usize = fields[2]
        .parse()
        .map_err(|_| err(1, format!("bad row count {:?}", fields[2])))?;
    let cols: usize = fields[3]
        .parse()
        .map_err(|_| err(1, format!("bad column count {:?}", fields[3])))?;
    let kind = match fields[4] {
        "int" => MatrixKind::Int,
        "real" => MatrixKind::Real,
        other => return Err(err(1, format!("unknown kind {other:?}"))),
    };

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen_rows = 0;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if seen_rows == rows {
            return Err(err(lineno, format!("more than the declared {rows} rows")));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v = match kind {
                MatrixKind::Int => tok
                    .parse::<i64>()
                    .map(|v| v as f64)
                    .map_err(|_| err(lineno, format!("bad integer {tok:?}")))?,
                MatrixKind::Real => tok
                    .parse::<f64>()
                    .map_err(|_| err(lineno, format!("bad real {tok:?}")))?,
            };
            if !v.is_finite() || v < 0.0 {
                return Err(err(
                    lineno,
                    format!("entry {tok} must be finite and non-negative"),
                ));
            }
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(err(
                lineno,
                format!("expected {cols} values, found {}", data.len() - before),
            ));
        }
        seen_rows += 1;
    }
    if seen_rows != rows {
        return Err(err(
            text.lines().count() + 1,
            format!("header declares {rows} rows but {seen_rows} found"),
        ));
    }
    GridMatrix::from_vec(rows, cols, kind, data)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &GridMatrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix(m)).map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<GridMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text, &path.display().to_string())
}

pub fn format_points(points: &[Point], side: f64) -> String {
    let mut out = String::with_capacity(points.len() * 48 + 32);
    let _ = writeln!(out, "PTS 1 {} {}", points.len(), format_real(side));
    for p in points {
        let _ = writeln!(out, "{} {}", format_real(p.x), format_real(p.y));
    }
    out
}

/// Parses `.pts` text into `(points, side)`.
pub fn parse_points(text: &str, origin: &str) -> Result<(Vec<Point>, f64)> {
    let err = |line: usize, msg: String| Error::Parse {
        path: origin.to_string(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "PTS" || fields[1] != "1" {
        return Err(err(1, format!("bad header {header:?}")));
    }
    let count: usize = fields[2]
        .parse()
        .map_err(|_| err(1, format!("bad count {:?}", fields[2])))?;
    let side: f64 = fields[3]
        .parse()
        .ok()
        .filter(|s: &f64| s.is_finite() && *s > 0.0)
        .ok_or_else(|| err(1, format!("bad side length {:?}", fields[3])))?;

    let mut points = Vec::with_capacity(count);
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if points.len() == count {
            return Err(err(
                lineno,
                format!("more than the declared {count} points"),
            ));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(err(
                lineno,
                format!("expected 2 values, found {}", toks.len()),
            ));
        }
        let parse = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(lineno, format!("bad coordinate {t:?}")))
        };
        points.push(Point::new(parse(toks[0])?, parse(toks[1])?));
    }
    if points.len() != count {
        return Err(err(
            text.lines().count() + 1,
            format!("header declares {count} points but {} found", points.len()),
        ));
    }
    Ok((points, side))
}

pub fn write_points(path: impl AsRef<Path>, points: &[Point], side: f64) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_points(points, side)).map_err(|e| Error::io(path, e))
}

pub fn read_points(path: impl AsRef<Path>) -> Result<(Vec<Point>, f64)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_points(&text, &path.display().to_string())
}
