//! Variation diminution: sign changes of `Ax` never exceed those of `x`
//! for strictly sign regular `A`.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactmat::Matrix;
use crate::scalar::{int, Scalar};
use crate::signclass::is_ssr;

/// `S^-(x)`: sign alternations after deleting zero entries.
pub fn sign_changes<T: Scalar>(x: &[T]) -> usize {
    x.iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .tuple_windows()
        .filter(|(a, b)| a != b)
        .count()
}

/// All vectors in `{-1, 0, 1}^n` except zero, in lexicographic order.
pub fn sign_vectors<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|_| [-1i64, 0, 1])
        .multi_cartesian_product()
        .filter(|v| v.iter().any(|&e| e != 0))
        .map(|v| v.into_iter().map(int).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VdViolation<T> {
    pub x: Vec<T>,
    pub ax: Vec<T>,
    pub changes_x: usize,
    pub changes_ax: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VdReport<T> {
    pub checked: usize,
    pub violations: Vec<VdViolation<T>>,
}

impl<T> VdReport<T> {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `S^-(Ax) <= S^-(x)` for every `x` in `xs`. `A` must be SSR.
pub fn vd_check<T: Scalar>(a: &Matrix<T>, xs: &[Vec<T>]) -> Result<VdReport<T>> {
    if !is_ssr(a, a.min_dim())? {
        return Err(Error::Precondition(
            "variation diminution needs an SSR matrix".into(),
        ));
    }
    let mut violations = Vec::new();
    for x in xs {
        let ax = a.mul_vec(x)?;
        let (cx, cax) = (sign_changes(x), sign_changes(&ax));
        if cax > cx {
            violations.push(VdViolation {
                x: x.clone(),
                ax,
                changes_x: cx,
                changes_ax: cax,
            });
        }
    }
    Ok(VdReport {
        checked: xs.len(),
        violations,
    })
}

/// [`vd_check`] over every nonzero `x` in `{-1, 0, 1}^n`.
pub fn vd_check_exhaustive<T: Scalar>(a: &Matrix<T>) -> Result<VdReport<T>> {
    vd_check(a, &sign_vectors(a.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::pascal;
    use crate::{Rational, RationalMatrix};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn counting_examples() {
        assert_eq!(sign_changes(&v(&[1, 0, -1])), 1);
        assert_eq!(sign_changes(&v(&[1, 2, 3])), 0);
        assert_eq!(sign_changes(&v(&[1, -1, 1, -1])), 3);
        assert_eq!(sign_changes(&v(&[0, 0])), 0);
    }

    #[test]
    fn two_by_two_example() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 2]]);
        let x = v(&[1, -1]);
        assert_eq!(a.mul_vec(&x).unwrap(), v(&[0, -1]));
        let r = vd_check(&a, &[x, v(&[1, 1])]).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.checked, 2);
    }

    #[test]
    fn pascal_exhaustive() {
        let r = vd_check_exhaustive(&pascal::<Rational>(3, 3)).unwrap();
        assert_eq!(r.checked, 26);
        assert!(r.is_clean());
    }

    #[test]
    fn rejects_non_ssr() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            vd_check_exhaustive(&a),
            Err(Error::Precondition(_))
        ));
    }
}
