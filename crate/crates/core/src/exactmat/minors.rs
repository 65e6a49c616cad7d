use std::fmt;

use itertools::Itertools;

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A square selection of rows and columns (0-based, strictly increasing).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorIndex {
    /// Validates the selection against an `m x n` shape.
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, shape: (usize, usize)) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::Dimension(format!(
                "non-square selection {}x{}",
                rows.len(),
                cols.len()
            )));
        }
        if rows.is_empty() {
            return Err(Error::Dimension("empty selection".into()));
        }
        check_increasing(&rows, shape.0, "row")?;
        check_increasing(&cols, shape.1, "column")?;
        Ok(MinorIndex { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }
}

fn check_increasing(idx: &[usize], bound: usize, what: &str) -> Result<()> {
    if let Some(&i) = idx.iter().find(|&&i| i >= bound) {
        return Err(Error::IndexOutOfRange(format!(
            "{what} {} of {bound}",
            i + 1
        )));
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::IndexOutOfRange(format!(
            "{what} indices must be strictly increasing"
        )));
    }
    Ok(())
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).join(",");
        write!(
            f,
            "rows {{{}}} cols {{{}}}",
            one_based(&self.rows),
            one_based(&self.cols)
        )
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn index_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// `C(m, k) * C(n, k)`.
pub fn minor_count(m: usize, n: usize, k: usize) -> usize {
    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    binom(m, k) * binom(n, k)
}

pub fn minor<T: Scalar>(a: &Matrix<T>, idx: &MinorIndex) -> Result<T> {
    check_increasing(&idx.rows, a.rows(), "row")?;
    check_increasing(&idx.cols, a.cols(), "column")?;
    a.submatrix(&idx.rows, &idx.cols)?.determinant()
}

/// Streams every `k x k` minor in lexicographic order of
/// `(row_indices, col_indices)`.
pub fn enumerate_minors<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<Minors<'_, T>> {
    let max = a.min_dim();
    if k == 0 || k > max {
        return Err(Error::OrderOutOfRange { order: k, max });
    }
    Ok(Minors {
        matrix: a,
        row_sets: index_sets(a.rows(), k),
        col_sets: index_sets(a.cols(), k),
        next: 0,
    })
}

pub struct Minors<'a, T> {
    matrix: &'a Matrix<T>,
    row_sets: Vec<Vec<usize>>,
    col_sets: Vec<Vec<usize>>,
    next: usize,
}

impl<T: Scalar> Iterator for Minors<'_, T> {
    type Item = (MinorIndex, T);

    fn next(&mut self) -> Option<Self::Item> {
        let total = self.row_sets.len() * self.col_sets.len();
        if self.next >= total {
            return None;
        }
        let (r, c) = (
            self.next / self.col_sets.len(),
            self.next % self.col_sets.len(),
        );
        self.next += 1;
        let rows = &self.row_sets[r];
        let cols = &self.col_sets[c];
        let value = self
            .matrix
            .submatrix(rows, cols)
            .and_then(|s| s.determinant())
            .expect("index sets are valid by construction");
        Some((
            MinorIndex {
                rows: rows.clone(),
                cols: cols.clone(),
            },
            value,
        ))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.row_sets.len() * self.col_sets.len() - self.next;
        (left, Some(left))
    }
}

impl<T: Scalar> ExactSizeIterator for Minors<'_, T> {}
