//! Oracles and samplers shared by the integration suites. Nothing here calls
//! into the determinant or classification code under test.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use signreg::{PrimitiveTransform, Rational, RationalMatrix, TransformChain};

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn rows(data: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::from_i64_rows(data)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return a[0][0].clone();
    }
    let mut total = Rational::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Rational>> = a[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = a[0][j].clone() * cofactor_det(&sub);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn oracle_minor(a: &RationalMatrix, rs: &[usize], cs: &[usize]) -> Rational {
    let sub: Vec<Vec<Rational>> = rs
        .iter()
        .map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect())
        .collect();
    cofactor_det(&sub)
}

/// All increasing index tuples of length `k` from `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Signs (-1, 0, 1) of every order-`r` minor, computed by the oracle.
pub fn oracle_minor_signs(a: &RationalMatrix, r: usize) -> Vec<i8> {
    let mut out = Vec::new();
    for rs in subsets(a.rows(), r) {
        for cs in subsets(a.cols(), r) {
            let v = oracle_minor(a, &rs, &cs);
            out.push(if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            });
        }
    }
    out
}

/// SR_k by the oracle: at each order all nonzero minors share a sign.
pub fn oracle_is_sr(a: &RationalMatrix, k: usize) -> bool {
    (1..=k).all(|r| {
        let s = oracle_minor_signs(a, r);
        !(s.contains(&1) && s.contains(&-1))
    })
}

/// SSR_k by the oracle.
pub fn oracle_is_ssr(a: &RationalMatrix, k: usize) -> bool {
    (1..=k).all(|r| {
        let s = oracle_minor_signs(a, r);
        !s.contains(&0) && !(s.contains(&1) && s.contains(&-1))
    })
}

pub fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    q(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, bound: i64) -> RationalMatrix {
    RationalMatrix::from_fn(m, n, |_, _| random_rational(rng, bound))
}

pub fn random_positive(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(1..=7), rng.gen_range(1..=7))
}

pub fn random_diag(rng: &mut ChaCha8Rng, m: usize, n: usize) -> PrimitiveTransform<Rational> {
    PrimitiveTransform::DiagEquiv {
        row_scale: (0..m).map(|_| random_positive(rng)).collect(),
        col_scale: (0..n).map(|_| random_positive(rng)).collect(),
    }
}

/// Random chain over the transforms that preserve SR (or, with
/// `pattern_mode`, every SR(eps)): diagonal equivalence, transpose when
/// square, and flips (paired in pattern mode) plus negation (SR only).
pub fn random_chain(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    pattern_mode: bool,
) -> TransformChain<Rational> {
    use PrimitiveTransform::*;
    let len = rng.gen_range(0..=6);
    let mut steps = Vec::new();
    for _ in 0..len {
        let mut options: Vec<u8> = vec![0, 1];
        if m == n {
            options.push(2);
        }
        if !pattern_mode {
            options.extend([3, 4]);
        }
        match options.choose(rng).unwrap() {
            0 => steps.push(random_diag(rng, m, n)),
            1 if pattern_mode => {
                steps.push(RowFlip);
                steps.push(ColFlip);
            }
            1 => steps.push(if rng.gen_bool(0.5) { RowFlip } else { ColFlip }),
            2 => steps.push(Transpose),
            3 => steps.push(Negate),
            _ => steps.push(if rng.gen_bool(0.5) { ColFlip } else { RowFlip }),
        }
    }
    TransformChain::new((m, n), steps).unwrap()
}

/// `S^-`: sign changes after deleting zeros.
pub fn oracle_sign_changes(x: &[Rational]) -> usize {
    let signs: Vec<bool> = x
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn oracle_mul_vec(a: &RationalMatrix, x: &[Rational]) -> Vec<Rational> {
    (0..a.rows())
        .map(|i| {
            (0..a.cols()).fold(Rational::zero(), |acc, j| {
                acc + a[(i, j)].clone() * x[j].clone()
            })
        })
        .collect()
}
