use super::Scalar;
use crate::{Error, Result};

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

/// Accumulates `(row, col, value)` triplets; duplicates are summed.
#[derive(Clone, Debug)]
pub struct TripletBuilder<T> {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> TripletBuilder<T> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, cap: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: T) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push((row, col, value));
    }

    pub fn extend(&mut self, other: TripletBuilder<T>) {
        self.entries.extend(other.entries);
    }

    /// Duplicates are summed in insertion order, which keeps the result
    /// deterministic for a deterministic insertion sequence.
    pub fn build(mut self) -> CsrMatrix<T> {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<T> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut b = TripletBuilder::with_capacity(nrows, ncols, triplets.len());
        for &(r, c, v) in triplets {
            b.push(r, c, v);
        }
        b.build()
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::one(); n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[s..e]
            .iter()
            .copied()
            .zip(self.values[s..e].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.col_idx[s..e].binary_search(&j) {
            Ok(k) => self.values[s + k],
            Err(_) => T::zero(),
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|i| self.row(i).fold(T::zero(), |acc, (j, v)| acc + v * x[j]))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut b = TripletBuilder::with_capacity(self.ncols, self.nrows, self.nnz());
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                b.push(j, i, v);
            }
        }
        b.build()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = self.transpose();
        for v in &mut t.values {
            *v = v.conj();
        }
        t
    }

    pub fn map_values<U: Scalar>(&self, f: impl Fn(T) -> U) -> CsrMatrix<U> {
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `self + shift·I` (square matrices only).
    pub fn add_diagonal(&self, shift: T) -> Result<Self> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                got: self.ncols,
            });
        }
        let mut b = TripletBuilder::with_capacity(self.nrows, self.ncols, self.nnz() + self.nrows);
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                b.push(i, j, v);
            }
            b.push(i, i, shift);
        }
        Ok(b.build())
    }

    /// Largest absolute difference `|A_ij − A_ji|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).modulus());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.modulus()))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }

    /// Matrix-market style coordinate text (1-based indices, real part only
    /// for complex matrices is not supported; callers format complex entries).
    pub fn write_coordinate(&self, out: &mut String, fmt_value: impl Fn(T) -> String) {
        use std::fmt::Write;
        let _ = writeln!(out, "%%MatrixMarket matrix coordinate general");
        let _ = writeln!(out, "{} {} {}", self.nrows, self.ncols, self.nnz());
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                let _ = writeln!(out, "{} {} {}", i + 1, j + 1, fmt_value(v));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, 4.0)]);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 0), 4.0);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn transpose_and_matvec() {
        let m = CsrMatrix::from_triplets(2, 3, &[(0, 2, 1.0), (1, 0, 2.0), (1, 1, 3.0)]);
        let t = m.transpose();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.get(2, 0), 1.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0, 1.0]), vec![1.0, 5.0]);
    }
}
