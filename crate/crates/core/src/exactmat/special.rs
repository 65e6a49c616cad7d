use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Named matrices used throughout the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecialKind<T> {
    /// `J`, all entries one.
    AllOnes {
        rows: usize,
        cols: usize,
    },
    /// `E_ij` (0-based position).
    Unit {
        rows: usize,
        cols: usize,
        i: usize,
        j: usize,
    },
    /// The antidiagonal 0-1 matrix `P_n`.
    Exchange(usize),
    Identity(usize),
    /// Entry `(i, j)` is `nodes[i]^j`.
    Vandermonde {
        nodes: Vec<T>,
        cols: usize,
    },
}

pub fn build_special<T: Scalar>(kind: &SpecialKind<T>) -> Result<Matrix<T>> {
    match kind {
        SpecialKind::AllOnes { rows, cols } => {
            check_shape(*rows, *cols)?;
            Ok(all_ones(*rows, *cols))
        }
        SpecialKind::Unit { rows, cols, i, j } => unit(*rows, *cols, *i, *j),
        SpecialKind::Exchange(n) => {
            check_shape(*n, *n)?;
            Ok(exchange(*n))
        }
        SpecialKind::Identity(n) => {
            check_shape(*n, *n)?;
            Ok(identity(*n))
        }
        SpecialKind::Vandermonde { nodes, cols } => vandermonde(nodes, *cols),
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
    }
    Ok(())
}

pub fn all_ones<T: Scalar>(rows: usize, cols: usize) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| T::one())
}

pub fn unit<T: Scalar>(rows: usize, cols: usize, i: usize, j: usize) -> Result<Matrix<T>> {
    check_shape(rows, cols)?;
    if i >= rows || j >= cols {
        return Err(Error::IndexOutOfRange(format!(
            "E_({},{}) in a {rows}x{cols} matrix",
            i + 1,
            j + 1
        )));
    }
    Ok(Matrix::from_fn(rows, cols, |p, q| {
        if (p, q) == (i, j) {
            T::one()
        } else {
            T::zero()
        }
    }))
}

pub fn exchange<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(
        n,
        n,
        |i, j| if i + j + 1 == n { T::one() } else { T::zero() },
    )
}

pub fn identity<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::identity(n)
}

pub fn vandermonde<T: Scalar>(nodes: &[T], cols: usize) -> Result<Matrix<T>> {
    check_shape(nodes.len(), cols)?;
    if !nodes[0].is_positive() || nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidNodes);
    }
    Ok(Matrix::from_fn(nodes.len(), cols, |i, j| {
        (0..j).fold(T::one(), |acc, _| acc * nodes[i].clone())
    }))
}
