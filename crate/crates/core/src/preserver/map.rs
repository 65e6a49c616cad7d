use std::fmt;

use crate::error::{Error, Result};
use crate::exactmat::{content_lines, format_matrix, parse_body, parse_dims, unit, Matrix};
use crate::scalar::Scalar;

/// A linear map on `m x n` matrices, stored as its `mn x mn` matrix in the
/// row-major basis `E_11, E_12, ..., E_1n, E_21, ..., E_mn`.
///
/// Column `i * n + j` is `vec(L(E_ij))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixSpaceMap<T> {
    rows: usize,
    cols: usize,
    matrix: Matrix<T>,
}

impl<T: Scalar> MatrixSpaceMap<T> {
    pub fn new(rows: usize, cols: usize, matrix: Matrix<T>) -> Result<Self> {
        let size = rows * cols;
        if size == 0 || matrix.shape() != (size, size) {
            return Err(Error::Dimension(format!(
                "a map on {rows}x{cols} matrices needs a {size}x{size} matrix, got {:?}",
                matrix.shape()
            )));
        }
        Ok(MatrixSpaceMap { rows, cols, matrix })
    }

    pub fn identity(rows: usize, cols: usize) -> Self {
        MatrixSpaceMap {
            rows,
            cols,
            matrix: Matrix::identity(rows * cols),
        }
    }

    /// Builds the map from the images of the unit matrices.
    pub fn from_images(
        rows: usize,
        cols: usize,
        mut image: impl FnMut(usize, usize) -> Matrix<T>,
    ) -> Result<Self> {
        let size = rows * cols;
        let mut l = Matrix::zeros(size, size);
        for i in 0..rows {
            for j in 0..cols {
                let img = image(i, j);
                if img.shape() != (rows, cols) {
                    return Err(Error::Dimension("image has the wrong shape".into()));
                }
                for (r, x) in img.iter().enumerate() {
                    l[(r, i * cols + j)] = x.clone();
                }
            }
        }
        MatrixSpaceMap::new(rows, cols, l)
    }

    /// The monomial map `E_ij -> scalars[k] E_targets[k]`, where `k` runs
    /// over positions in row-major order.
    pub fn monomial(
        rows: usize,
        cols: usize,
        targets: &[(usize, usize)],
        scalars: &[T],
    ) -> Result<Self> {
        let size = rows * cols;
        if targets.len() != size || scalars.len() != size {
            return Err(Error::Dimension(format!(
                "monomial map on {rows}x{cols} needs {size} targets and scalars"
            )));
        }
        if targets.iter().any(|&(p, q)| p >= rows || q >= cols) {
            return Err(Error::IndexOutOfRange(
                "monomial target outside the shape".into(),
            ));
        }
        let mut l = Matrix::zeros(size, size);
        for (k, (&(p, q), c)) in targets.iter().zip(scalars).enumerate() {
            l[(p * cols + q, k)] = c.clone();
        }
        MatrixSpaceMap::new(rows, cols, l)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// `unvec(L vec(A))`.
    pub fn apply(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        if a.shape() != self.shape() {
            return Err(Error::Dimension(format!(
                "map on {:?} applied to a {:?} matrix",
                self.shape(),
                a.shape()
            )));
        }
        Matrix::new(self.rows, self.cols, self.matrix.mul_vec(a.as_slice())?)
    }

    pub fn image_of_unit(&self, i: usize, j: usize) -> Matrix<T> {
        self.apply(&unit(self.rows, self.cols, i, j).expect("in range"))
            .expect("shape matches")
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if self.shape() != first.shape() {
            return Err(Error::Dimension("maps on different shapes".into()));
        }
        MatrixSpaceMap::new(self.rows, self.cols, self.matrix.mul(&first.matrix)?)
    }

    pub fn inverse(&self) -> Option<Self> {
        self.matrix.inverse().map(|matrix| MatrixSpaceMap {
            rows: self.rows,
            cols: self.cols,
            matrix,
        })
    }

    /// Whether `b` lies in the range of the map.
    pub fn range_contains(&self, b: &Matrix<T>) -> bool {
        let size = self.rows * self.cols;
        let augmented = Matrix::from_fn(size, size + 1, |r, c| {
            if c < size {
                self.matrix[(r, c)].clone()
            } else {
                b.as_slice()[r].clone()
            }
        });
        augmented.rank() == self.matrix.rank()
    }

    /// Parses the operator file format: a line `map m n`, then the
    /// `mn x mn` matrix in the shared matrix text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        let (m, n) = match tokens.as_slice() {
            ["map", rest @ ..] => parse_dims(rest, line)?,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "expected header 'map m n'".into(),
                })
            }
        };
        let (line, dims) = lines.next().ok_or(Error::Parse {
            line,
            message: "missing matrix header".into(),
        })?;
        let tokens: Vec<&str> = dims.split_whitespace().collect();
        let (r, c) = parse_dims(&tokens, line)?;
        if (r, c) != (m * n, m * n) {
            return Err(Error::Parse {
                line,
                message: format!("a map on {m}x{n} matrices needs a {0}x{0} matrix", m * n),
            });
        }
        let matrix = parse_body(&mut lines, r, c, line)?;
        if let Some((extra, _)) = lines.next() {
            return Err(Error::Parse {
                line: extra,
                message: "trailing content after operator".into(),
            });
        }
        MatrixSpaceMap::new(m, n, matrix)
    }
}

impl<T: Scalar> fmt::Display for MatrixSpaceMap<T> {
    /// The operator file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "map {} {}\n{}",
            self.rows,
            self.cols,
            format_matrix(&self.matrix)
        )
    }
}
