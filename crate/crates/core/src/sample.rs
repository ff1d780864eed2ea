use crate::error::{Error, Result};

/// An n x d matrix of nonnegative finite observations, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl SampleMatrix {
    /// Validates entries (nonnegative, finite) and shape (n ≥ 1, d ≥ 1).
    pub fn new(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::DimensionMismatch {
                reason: format!("matrix must have n >= 1 rows and d >= 1 columns, got {n} x {d}"),
            });
        }
        if data.len() != n * d {
            return Err(Error::DimensionMismatch {
                reason: format!("expected {} entries for {n} x {d}, got {}", n * d, data.len()),
            });
        }
        for (pos, &v) in data.iter().enumerate() {
            let (row, column) = (pos / d + 1, pos % d + 1);
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row, column });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { row, column, value: v });
            }
        }
        Ok(SampleMatrix { data, n, d })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::RaggedRow { row: i + 1, expected: d, found: row.len() });
            }
        }
        Self::new(rows.into_iter().flatten().collect(), n, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    /// L1 norm of every row (entries are nonnegative, so this is the row sum).
    pub fn row_l1_norms(&self) -> Vec<f64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    /// Entrywise map; the result is revalidated.
    pub fn map_entries(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.data.iter().map(|&v| f(v)).collect(), self.n, self.d)
    }

    /// The j-th column (0-based) as a fresh vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.d + j]).collect()
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }
}
