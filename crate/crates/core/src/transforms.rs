//! Canonical preserver transformations, their composition into chains, and
//! the induced action on sign patterns.
//!
//! Chain text format: comma-separated tokens
//! `diag(F=f1,..,fm;E=e1,..,en)`, `neg`, `rowflip`, `colflip`, `transpose`,
//! `hadamard(h11,h12;h21,h22)`, `swap2`, `rowperm(p1,..,pm)`,
//! `colperm(q1,..,qn)`. Permutation tokens list the 1-based destination of
//! each row (column).

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactmat::{parse_entry, unit, Matrix};
use crate::preserver::MatrixSpaceMap;
use crate::scalar::Scalar;
use crate::signclass::SignPattern;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimitiveTransform<T> {
    /// `A -> F A E` with positive diagonals `F = diag(row_scale)`,
    /// `E = diag(col_scale)`.
    DiagEquiv {
        row_scale: Vec<T>,
        col_scale: Vec<T>,
    },
    /// `A -> -A`.
    Negate,
    /// `A -> P_m A`.
    RowFlip,
    /// `A -> A P_n`.
    ColFlip,
    /// `A -> A^T`, square shapes only.
    Transpose,
    /// `A -> H o A` for an entrywise positive `H`; 2x2 and vector shapes only.
    HadamardScale(Matrix<T>),
    /// `[[a, b], [c, d]] -> [[a, b], [d, c]]`; 2x2 only.
    Swap2x2BottomPair,
    /// Row `i` moves to row `perm[i]`; vector shapes only.
    RowPermute(Vec<usize>),
    /// Column `j` moves to column `perm[j]`; vector shapes only.
    ColPermute(Vec<usize>),
}

fn illegal(msg: impl Into<String>) -> Error {
    Error::IllegalTransform(msg.into())
}

fn check_permutation(perm: &[usize], len: usize, what: &str) -> Result<()> {
    if perm.len() != len || perm.iter().copied().sorted().ne(0..len) {
        return Err(illegal(format!("{what} is not a permutation of 1..{len}")));
    }
    Ok(())
}

/// Sign of the reversal permutation on `r` letters, as "is odd".
fn reversal_is_odd(r: usize) -> bool {
    (r * r.saturating_sub(1) / 2) % 2 == 1
}

impl<T: Scalar> PrimitiveTransform<T> {
    /// Checks the transform is legal on `m x n` matrices.
    pub fn validate(&self, (m, n): (usize, usize)) -> Result<()> {
        use PrimitiveTransform::*;
        match self {
            DiagEquiv {
                row_scale,
                col_scale,
            } => {
                if row_scale.len() != m || col_scale.len() != n {
                    return Err(illegal(format!(
                        "diag scales of length {}/{} on a {m}x{n} shape",
                        row_scale.len(),
                        col_scale.len()
                    )));
                }
                if row_scale.iter().chain(col_scale).any(|x| !x.is_positive()) {
                    return Err(illegal("diag scales must be positive"));
                }
            }
            Negate | RowFlip | ColFlip => {}
            Transpose => {
                if m != n {
                    return Err(illegal(format!("transpose on a non-square {m}x{n} shape")));
                }
            }
            HadamardScale(h) => {
                if !((m, n) == (2, 2) || m.min(n) == 1) {
                    return Err(illegal(format!("hadamard scaling on a {m}x{n} shape")));
                }
                if h.shape() != (m, n) {
                    return Err(illegal("hadamard factor has the wrong shape"));
                }
                if h.iter().any(|x| !x.is_positive()) {
                    return Err(illegal("hadamard factor must be entrywise positive"));
                }
            }
            Swap2x2BottomPair => {
                if (m, n) != (2, 2) {
                    return Err(illegal(format!("swap2 on a {m}x{n} shape")));
                }
            }
            RowPermute(p) => {
                if m.min(n) != 1 {
                    return Err(illegal(format!("row permutation on a {m}x{n} shape")));
                }
                check_permutation(p, m, "row permutation")?;
            }
            ColPermute(p) => {
                if m.min(n) != 1 {
                    return Err(illegal(format!("column permutation on a {m}x{n} shape")));
                }
                check_permutation(p, n, "column permutation")?;
            }
        }
        Ok(())
    }

    pub fn apply(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        use PrimitiveTransform::*;
        self.validate(a.shape())?;
        let (m, n) = a.shape();
        Ok(match self {
            DiagEquiv {
                row_scale,
                col_scale,
            } => Matrix::from_fn(m, n, |i, j| {
                row_scale[i].clone() * a[(i, j)].clone() * col_scale[j].clone()
            }),
            Negate => a.neg(),
            RowFlip => Matrix::from_fn(m, n, |i, j| a[(m - 1 - i, j)].clone()),
            ColFlip => Matrix::from_fn(m, n, |i, j| a[(i, n - 1 - j)].clone()),
            Transpose => a.transpose(),
            HadamardScale(h) => Matrix::from_fn(m, n, |i, j| h[(i, j)].clone() * a[(i, j)].clone()),
            Swap2x2BottomPair => Matrix::from_fn(2, 2, |i, j| {
                if i == 1 {
                    a[(1, 1 - j)].clone()
                } else {
                    a[(i, j)].clone()
                }
            }),
            RowPermute(p) => {
                let mut out = Matrix::zeros(m, n);
                for i in 0..m {
                    for j in 0..n {
                        out[(p[i], j)] = a[(i, j)].clone();
                    }
                }
                out
            }
            ColPermute(p) => {
                let mut out = Matrix::zeros(m, n);
                for i in 0..m {
                    for j in 0..n {
                        out[(i, p[j])] = a[(i, j)].clone();
                    }
                }
                out
            }
        })
    }

    /// Sign pattern of the image of any matrix with pattern `eps`.
    ///
    /// Orders whose minors all vanish stay `*`. Hadamard scaling and the
    /// 2x2/vector permutations only have a determined action on order 1.
    pub fn pushforward_pattern(&self, eps: &SignPattern) -> Result<SignPattern> {
        use PrimitiveTransform::*;
        let per_order = |f: &dyn Fn(usize) -> bool| {
            SignPattern::new(
                (1..)
                    .zip(eps.symbols())
                    .map(|(r, s)| s.times_parity(f(r)))
                    .collect(),
            )
        };
        match self {
            DiagEquiv { .. } | Transpose => Ok(eps.clone()),
            Negate => Ok(per_order(&|r| r % 2 == 1)),
            RowFlip | ColFlip => Ok(per_order(&reversal_is_odd)),
            HadamardScale(_) | Swap2x2BottomPair | RowPermute(_) | ColPermute(_) => {
                if eps.len() > 1 {
                    Err(illegal(format!(
                        "{} does not determine signs of order 2 and above",
                        self.kind_name()
                    )))
                } else {
                    Ok(eps.clone())
                }
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        use PrimitiveTransform::*;
        match self {
            DiagEquiv { .. } => "diag",
            Negate => "neg",
            RowFlip => "rowflip",
            ColFlip => "colflip",
            Transpose => "transpose",
            HadamardScale(_) => "hadamard",
            Swap2x2BottomPair => "swap2",
            RowPermute(_) => "rowperm",
            ColPermute(_) => "colperm",
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().join(",")
}

impl<T: Scalar> fmt::Display for PrimitiveTransform<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PrimitiveTransform::*;
        match self {
            DiagEquiv {
                row_scale,
                col_scale,
            } => {
                write!(f, "diag(F={};E={})", join(row_scale), join(col_scale))
            }
            HadamardScale(h) => write!(
                f,
                "hadamard({})",
                h.to_rows().iter().map(|r| join(r)).join(";")
            ),
            RowPermute(p) | ColPermute(p) => {
                let one_based: Vec<usize> = p.iter().map(|i| i + 1).collect();
                write!(f, "{}({})", self.kind_name(), join(&one_based))
            }
            _ => write!(f, "{}", self.kind_name()),
        }
    }
}

/// An ordered sequence of transforms on a fixed `m x n` shape, applied
/// first to last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransformChain<T> {
    shape: (usize, usize),
    steps: Vec<PrimitiveTransform<T>>,
}

impl<T: Scalar> TransformChain<T> {
    pub fn new(shape: (usize, usize), steps: Vec<PrimitiveTransform<T>>) -> Result<Self> {
        if shape.0 == 0 || shape.1 == 0 {
            return Err(Error::Dimension(format!(
                "empty shape {}x{}",
                shape.0, shape.1
            )));
        }
        for s in &steps {
            s.validate(shape)?;
        }
        Ok(TransformChain { shape, steps })
    }

    pub fn identity(shape: (usize, usize)) -> Self {
        TransformChain {
            shape,
            steps: Vec::new(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn steps(&self) -> &[PrimitiveTransform<T>] {
        &self.steps
    }

    pub fn push(&mut self, step: PrimitiveTransform<T>) -> Result<()> {
        step.validate(self.shape)?;
        self.steps.push(step);
        Ok(())
    }

    /// `self` followed by `then`.
    pub fn concat(&self, then: &Self) -> Result<Self> {
        if self.shape != then.shape {
            return Err(Error::Dimension("chains on different shapes".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend(then.steps.iter().cloned());
        Ok(TransformChain {
            shape: self.shape,
            steps,
        })
    }

    pub fn apply(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        if a.shape() != self.shape {
            return Err(Error::Dimension(format!(
                "chain on {:?} applied to a {:?} matrix",
                self.shape,
                a.shape()
            )));
        }
        self.steps
            .iter()
            .try_fold(a.clone(), |acc, t| t.apply(&acc))
    }

    pub fn pushforward_pattern(&self, eps: &SignPattern) -> Result<SignPattern> {
        self.steps
            .iter()
            .try_fold(eps.clone(), |acc, t| t.pushforward_pattern(&acc))
    }

    /// Parses the chain text format for the given shape.
    pub fn parse(shape: (usize, usize), text: &str) -> Result<Self> {
        let steps = split_top_level(text)?
            .into_iter()
            .filter(|t| !t.is_empty())
            .map(parse_token)
            .collect::<Result<Vec<_>>>()?;
        TransformChain::new(shape, steps)
    }
}

impl<T: Scalar> fmt::Display for TransformChain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.steps.iter().join(","))
    }
}

/// The `mn x mn` matrix of the chain in the row-major basis, built by
/// applying the chain to every unit matrix.
pub fn compose_to_operator<T: Scalar>(chain: &TransformChain<T>) -> MatrixSpaceMap<T> {
    let (m, n) = chain.shape;
    let mut l = Matrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            let image = chain
                .apply(&unit(m, n, i, j).expect("in range"))
                .expect("validated chain");
            for (row, x) in image.iter().enumerate() {
                l[(row, i * n + j)] = x.clone();
            }
        }
    }
    MatrixSpaceMap::new(m, n, l).expect("square of size mn")
}

fn split_top_level(text: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(illegal("unbalanced ')' in chain"));
                }
            }
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(illegal("unbalanced '(' in chain"));
    }
    out.push(text[start..].trim());
    Ok(out)
}

fn parse_list<T: Scalar>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            parse_entry(x.trim(), 1).map_err(|_| illegal(format!("invalid number '{}'", x.trim())))
        })
        .collect()
}

fn parse_perm(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .map(|v| v - 1)
                .ok_or_else(|| illegal(format!("invalid permutation entry '{}'", x.trim())))
        })
        .collect()
}

fn parse_token<T: Scalar>(token: &str) -> Result<PrimitiveTransform<T>> {
    use PrimitiveTransform::*;
    let (name, args) = match token.split_once('(') {
        Some((name, rest)) => {
            let args = rest
                .strip_suffix(')')
                .ok_or_else(|| illegal(format!("missing ')' in '{token}'")))?;
            (name.trim(), Some(args))
        }
        None => (token.trim(), None),
    };
    match (name, args) {
        ("neg", None) => Ok(Negate),
        ("rowflip", None) => Ok(RowFlip),
        ("colflip", None) => Ok(ColFlip),
        ("transpose", None) => Ok(Transpose),
        ("swap2", None) => Ok(Swap2x2BottomPair),
        ("diag", Some(args)) => {
            let (f, e) = args
                .split_once(';')
                .ok_or_else(|| illegal("diag expects 'F=...;E=...'"))?;
            let f = f
                .trim()
                .strip_prefix("F=")
                .ok_or_else(|| illegal("diag expects 'F='"))?;
            let e = e
                .trim()
                .strip_prefix("E=")
                .ok_or_else(|| illegal("diag expects 'E='"))?;
            Ok(DiagEquiv {
                row_scale: parse_list(f)?,
                col_scale: parse_list(e)?,
            })
        }
        ("hadamard", Some(args)) => {
            let rows = args
                .split(';')
                .map(parse_list)
                .collect::<Result<Vec<Vec<T>>>>()?;
            Ok(HadamardScale(
                Matrix::from_rows(rows).map_err(|e| illegal(format!("hadamard factor: {e}")))?,
            ))
        }
        ("rowperm", Some(args)) => Ok(RowPermute(parse_perm(args)?)),
        ("colperm", Some(args)) => Ok(ColPermute(parse_perm(args)?)),
        _ => Err(illegal(format!("unknown transform token '{token}'"))),
    }
}
