use std::fmt;

use crate::preserver::MatrixSpaceMap;
use crate::scalar::{Scalar, Sign};

/// Support data of a signed monomial map: `L(E_ij) = sign * l_ij * E_pq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMap<T> {
    shape: (usize, usize),
    targets: Vec<(usize, usize)>,
    scalars: Vec<T>,
    negated: bool,
}

impl<T: Scalar> SupportMap<T> {
    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    /// The unique position `(p, q)` in the support of `L(E_ij)`.
    pub fn target(&self, i: usize, j: usize) -> (usize, usize) {
        self.targets[i * self.shape.1 + j]
    }

    /// `|l_ij|`, always positive.
    pub fn scalar(&self, i: usize, j: usize) -> &T {
        &self.scalars[i * self.shape.1 + j]
    }

    /// Whether every nonzero entry of `L` is negative.
    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn global_sign(&self) -> Sign {
        if self.negated {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    /// Targets indexed by row-major source slot.
    pub fn targets(&self) -> &[(usize, usize)] {
        &self.targets
    }
}

/// Why a map is not `±` a nonnegative monomial matrix. Positions are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialFailure {
    /// `L(E_ij) = 0`.
    ZeroImage { source: (usize, usize) },
    /// `L(E_ij)` has more than one nonzero entry.
    MultipleSupport {
        source: (usize, usize),
        count: usize,
    },
    /// Two unit matrices map onto the same position.
    SharedTarget {
        target: (usize, usize),
        sources: [(usize, usize); 2],
    },
    /// Nonzero entries of both signs.
    MixedSigns {
        positive: (usize, usize),
        negative: (usize, usize),
    },
}

impl fmt::Display for MonomialFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |(i, j): (usize, usize)| format!("E_{}{}", i + 1, j + 1);
        match self {
            MonomialFailure::ZeroImage { source } => write!(f, "L({}) = 0", p(*source)),
            MonomialFailure::MultipleSupport { source, count } => {
                write!(f, "L({}) has {count} nonzero entries", p(*source))
            }
            MonomialFailure::SharedTarget { target, sources } => write!(
                f,
                "L({}) and L({}) are both supported at {}",
                p(sources[0]),
                p(sources[1]),
                p(*target)
            ),
            MonomialFailure::MixedSigns { positive, negative } => write!(
                f,
                "L({}) is positive but L({}) is negative",
                p(*positive),
                p(*negative)
            ),
        }
    }
}

/// Checks that `L` or `-L` is a nonnegative monomial matrix and extracts
/// the support bijection with its scalars.
pub fn monomial_analysis<T: Scalar>(
    map: &MatrixSpaceMap<T>,
) -> Result<SupportMap<T>, MonomialFailure> {
    let (m, n) = map.shape();
    let size = m * n;
    let l = map.matrix();
    let pos = |k: usize| (k / n, k % n);
    let mut targets = Vec::with_capacity(size);
    let mut scalars = Vec::with_capacity(size);
    let mut owner: Vec<Option<usize>> = vec![None; size];
    let mut first_positive = None;
    let mut first_negative = None;
    for col in 0..size {
        let support: Vec<usize> = (0..size).filter(|&r| !l[(r, col)].is_zero()).collect();
        let row = match support.as_slice() {
            [] => return Err(MonomialFailure::ZeroImage { source: pos(col) }),
            [r] => *r,
            many => {
                return Err(MonomialFailure::MultipleSupport {
                    source: pos(col),
                    count: many.len(),
                })
            }
        };
        if let Some(prev) = owner[row] {
            return Err(MonomialFailure::SharedTarget {
                target: pos(row),
                sources: [pos(prev), pos(col)],
            });
        }
        owner[row] = Some(col);
        let x = &l[(row, col)];
        if x.is_positive() {
            first_positive.get_or_insert(col);
        } else {
            first_negative.get_or_insert(col);
        }
        if let (Some(p), Some(q)) = (first_positive, first_negative) {
            return Err(MonomialFailure::MixedSigns {
                positive: pos(p),
                negative: pos(q),
            });
        }
        targets.push(pos(row));
        scalars.push(x.abs());
    }
    Ok(SupportMap {
        shape: (m, n),
        targets,
        scalars,
        negated: first_negative.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::{Rational, RationalMatrix};

    #[test]
    fn identity_map() {
        let s = monomial_analysis(&MatrixSpaceMap::<Rational>::identity(2, 3)).unwrap();
        assert!(!s.is_negated());
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(s.target(i, j), (i, j));
                assert_eq!(s.scalar(i, j), &int::<Rational>(1));
            }
        }
    }

    #[test]
    fn scaled_negation() {
        let l = RationalMatrix::identity(4).scale(&int(-2));
        let s = monomial_analysis(&MatrixSpaceMap::new(2, 2, l).unwrap()).unwrap();
        assert!(s.is_negated());
        assert_eq!(s.global_sign(), Sign::Negative);
        assert_eq!(s.scalar(1, 1), &int::<Rational>(2));
        assert_eq!(s.target(0, 1), (0, 1));
    }

    #[test]
    fn two_supports() {
        let mut l = RationalMatrix::identity(4);
        l[(1, 0)] = int(1);
        let err = monomial_analysis(&MatrixSpaceMap::new(2, 2, l).unwrap()).unwrap_err();
        assert_eq!(
            err,
            MonomialFailure::MultipleSupport {
                source: (0, 0),
                count: 2
            }
        );
        assert_eq!(err.to_string(), "L(E_11) has 2 nonzero entries");
    }

    #[test]
    fn other_failures() {
        let mut l = RationalMatrix::identity(4);
        l[(2, 2)] = int(0);
        assert_eq!(
            monomial_analysis(&MatrixSpaceMap::new(2, 2, l).unwrap()).unwrap_err(),
            MonomialFailure::ZeroImage { source: (1, 0) }
        );
        let mut l = RationalMatrix::identity(4);
        l[(1, 1)] = int(0);
        l[(0, 1)] = int(1);
        assert!(matches!(
            monomial_analysis(&MatrixSpaceMap::new(2, 2, l).unwrap()).unwrap_err(),
            MonomialFailure::SharedTarget { target: (0, 0), .. }
        ));
        let mut l = RationalMatrix::identity(4);
        l[(3, 3)] = int(-1);
        assert_eq!(
            monomial_analysis(&MatrixSpaceMap::new(2, 2, l).unwrap()).unwrap_err(),
            MonomialFailure::MixedSigns {
                positive: (0, 0),
                negative: (1, 1)
            }
        );
    }
}
