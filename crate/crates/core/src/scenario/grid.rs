use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Whether a matrix holds counts (`Int`) or raw generator output (`Real`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Int,
    Real,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Int => "int",
            MatrixKind::Real => "real",
        }
    }
}

/// Dense row-major grid. Row index follows the `y` axis, column index the
/// `x` axis, and row 0 sits at `y = 0`.
///
/// Entries are always finite and non-negative; `Int` matrices hold only
/// integral values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMatrix {
    rows: usize,
    cols: usize,
    kind: MatrixKind,
    data: Vec<f64>,
}

impl GridMatrix {
    pub fn zeros(rows: usize, cols: usize, kind: MatrixKind) -> Self {
        Self {
            rows,
            cols,
            kind,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn square(n: usize, kind: MatrixKind) -> Self {
        Self::zeros(n, n, kind)
    }

    pub fn from_vec(rows: usize, cols: usize, kind: MatrixKind, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for (idx, &v) in data.iter().enumerate() {
            check_entry(kind, v).map_err(|msg| Error::InvalidEntry {
                row: idx / cols.max(1),
                col: idx % cols.max(1),
                msg,
            })?;
        }
        Ok(Self {
            rows,
            cols,
            kind,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Overwrites one entry.
    ///
    /// # Panics
    /// If the value violates the matrix invariants.
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        if let Err(msg) = check_entry(self.kind, value) {
            panic!("GridMatrix::set({row}, {col}): {msg}");
        }
        self.data[row * self.cols + col] = value;
    }

    pub fn add(&mut self, row: usize, col: usize, amount: f64) {
        let v = self.get(row, col) + amount;
        self.set(row, col, v);
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Same entries tagged as `Real`.
    pub fn to_real(&self) -> Self {
        Self {
            kind: MatrixKind::Real,
            ..self.clone()
        }
    }
}

fn check_entry(kind: MatrixKind, v: f64) -> std::result::Result<(), String> {
    if !v.is_finite() {
        return Err(format!("non-finite value {v}"));
    }
    if v < 0.0 {
        return Err(format!("negative value {v}"));
    }
    if kind == MatrixKind::Int && (v.fract() != 0.0 || v > 9.007_199_254_740_992e15) {
        return Err(format!("non-integral value {v} in an int matrix"));
    }
    Ok(())
}
