//! Compressed sparse row storage for a single N×N block.

use std::collections::BTreeMap;

/// Square sparse matrix in CSR layout with sorted column indices per row.
///
/// Stored values are strictly positive; an absent entry is a zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrBlock {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrBlock {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a block from an ordered map of `(row, col) -> weight`.
    /// Zero weights are dropped.
    pub fn from_map(n: usize, entries: &BTreeMap<(usize, usize), f64>) -> Self {
        let mut indptr = vec![0; n + 1];
        let mut indices = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for (&(r, c), &w) in entries {
            debug_assert!(r < n && c < n);
            if w == 0.0 {
                continue;
            }
            indptr[r + 1] += 1;
            indices.push(c);
            values.push(w);
        }
        for r in 0..n {
            indptr[r + 1] += indptr[r];
        }
        Self {
            n,
            indptr,
            indices,
            values,
        }
    }

    pub fn to_map(&self) -> BTreeMap<(usize, usize), f64> {
        self.iter().map(|(r, c, w)| ((r, c), w)).collect()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let span = self.indptr[row]..self.indptr[row + 1];
        match self.indices[span.clone()].binary_search(&col) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => 0.0,
        }
    }

    /// Iterates stored entries as `(row, col, weight)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.indptr[r]..self.indptr[r + 1]).map(move |p| (r, self.indices[p], self.values[p]))
        })
    }

    /// `out += A x`
    pub fn mul_add(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate().take(self.n) {
            let mut acc = 0.0;
            for p in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[p] * x[self.indices[p]];
            }
            *o += acc;
        }
    }

    /// `out += Aᵀ x`
    pub fn mul_transpose_add(&self, x: &[f64], out: &mut [f64]) {
        for (r, &xr) in x.iter().enumerate().take(self.n) {
            if xr == 0.0 {
                continue;
            }
            for p in self.indptr[r]..self.indptr[r + 1] {
                out[self.indices[p]] += self.values[p] * xr;
            }
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|r| self.values[self.indptr[r]..self.indptr[r + 1]].iter().sum())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(r, c, w)| self.get(c, r) == w)
    }
}
