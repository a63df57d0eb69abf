use std::io::Write;

use crate::scalar::{to_f64, Real};

/// Coordinate-format accumulator; duplicate entries are summed on
/// conversion.
#[derive(Clone, Debug)]
pub struct TripletBuilder<T> {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Real> TripletBuilder<T> {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(n_rows: usize, n_cols: usize, cap: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: T) {
        debug_assert!(r < self.n_rows && c < self.n_cols);
        self.entries.push((r, c, v));
    }

    /// Adds a dense block `local[i][j]` at rows `rows[i]`, cols `cols[j]`.
    pub fn add_block(&mut self, rows: &[usize], cols: &[usize], local: &[T]) {
        debug_assert_eq!(local.len(), rows.len() * cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                self.push(r, c, local[i * cols.len() + j]);
            }
        }
    }

    /// Appends every entry of `m` shifted by `(r0, c0)`, scaled by `s`.
    pub fn add_matrix(&mut self, m: &CsrMatrix<T>, r0: usize, c0: usize, s: T) {
        for (r, c, v) in m.iter() {
            self.push(r0 + r, c0 + c, s * v);
        }
    }

    /// Appends the transpose of `m` shifted by `(r0, c0)`, scaled by `s`.
    pub fn add_transpose(&mut self, m: &CsrMatrix<T>, r0: usize, c0: usize, s: T) {
        for (r, c, v) in m.iter() {
            self.push(r0 + c, c0 + r, s * v);
        }
    }

    pub fn build(self) -> CsrMatrix<T> {
        CsrMatrix::from_triplets(self.n_rows, self.n_cols, self.entries)
    }
}

/// Compressed sparse row matrix with sorted, unique column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        mut entries: Vec<(usize, usize, T)>,
    ) -> Self {
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<T> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            assert!(r < n_rows && c < n_cols, "triplet out of bounds");
            if last == Some((r, c)) {
                let x = values.last_mut().unwrap();
                *x += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self::from_triplets(n_rows, n_cols, Vec::new())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n_rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[range.clone()].binary_search(&c) {
            Ok(k) => self.values[range.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|r| self.row(r).fold(T::zero(), |s, (c, v)| s + v * x[c]))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.n_cols,
            self.n_rows,
            self.iter().map(|(r, c, v)| (c, r, v)).collect(),
        )
    }

    /// Largest absolute entry of `A - Aᵀ`, relative to the largest entry.
    pub fn asymmetry(&self) -> T {
        if self.n_rows != self.n_cols {
            return T::infinity();
        }
        let mut worst = T::zero();
        for (r, c, v) in self.iter() {
            worst = worst.max((v - self.get(c, r)).abs());
        }
        worst / self.max_abs().max(T::min_positive_value())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.n_rows)
            .map(|r| self.row(r).fold(T::zero(), |s, (_, v)| s + v.abs()))
            .fold(T::zero(), T::max)
    }

    /// Writes the matrix in MatrixMarket coordinate format.
    pub fn write_matrix_market(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", self.n_rows, self.n_cols, self.nnz())?;
        for (r, c, v) in self.iter() {
            writeln!(w, "{} {} {:.17e}", r + 1, c + 1, to_f64(v))?;
        }
        Ok(())
    }
}

/// Algebraic structure of a system matrix, used to pick a factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    General,
    Symmetric,
    SymmetricPositiveDefinite,
}

/// A sparse linear system `A x = b`.
#[derive(Clone, Debug)]
pub struct SparseSystem<T> {
    pub matrix: CsrMatrix<T>,
    pub rhs: Vec<T>,
    pub structure: Structure,
}

impl<T: Real> SparseSystem<T> {
    pub fn new(matrix: CsrMatrix<T>, rhs: Vec<T>, structure: Structure) -> Self {
        assert_eq!(matrix.n_rows(), rhs.len());
        assert_eq!(matrix.n_rows(), matrix.n_cols());
        Self {
            matrix,
            rhs,
            structure,
        }
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let mut t = TripletBuilder::<f64>::new(2, 2);
        t.push(1, 0, 1.0);
        t.push(0, 1, 2.0);
        t.push(1, 0, 3.0);
        t.push(0, 0, -1.0);
        let m = t.build();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(1, 0), 4.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0]), vec![1.0, 4.0]);
        assert_eq!(m.transpose().get(0, 1), 4.0);
        assert!(m.asymmetry() > 0.0);
    }

    #[test]
    fn matrix_market_header() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(0, 2, 1.5f64)]);
        let mut buf = Vec::new();
        m.write_matrix_market(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[1], "2 3 1");
        assert!(lines[2].starts_with("1 3 1.5"));
    }
}
