//! Exact scalar types.
//!
//! Every algorithm in the crate is written against [`Scalar`], an exact
//! ordered field. Signs of minors are the whole subject, so floating point
//! types deliberately do not implement it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, One, Signed};

/// An exact ordered field usable as a matrix entry.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Determinant of a square row-major grid. The default runs Bareiss
    /// elimination directly over `Self`, where every division is exact.
    fn fraction_free_det(rows: Vec<Vec<Self>>) -> Self {
        bareiss(rows)
    }

    /// Builds `numer / denom`; `denom` must be nonzero.
    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer).expect("i64 fits") / Self::from_i64(denom).expect("i64 fits")
    }
}

impl Scalar for BigRational {
    /// Clears denominators row by row and runs Bareiss over the integers.
    fn fraction_free_det(rows: Vec<Vec<Self>>) -> Self {
        let mut scale = BigInt::one();
        let int_rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|row| {
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let ints = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
                scale *= lcm;
                ints
            })
            .collect();
        BigRational::new(bareiss(int_rows), scale)
    }
}

impl Scalar for Rational64 {}

/// The integer `n` as a scalar.
pub fn int<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("i64 fits")
}

/// Sign of a scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Scalar>(x: &T) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// Bareiss fraction-free elimination. `R` must be an integral domain in
/// which the Bareiss quotients are exact (integers or any field).
pub fn bareiss<R: Clone + Num>(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone())
                    / prev.clone();
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        R::zero() - det
    } else {
        det
    }
}
