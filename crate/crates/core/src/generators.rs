//! Exact test matrices: totally positive families, SSR(eps) instances,
//! degenerate SR instances and the scaled all-ones gadgets.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmat::{all_ones, vandermonde, Matrix};
use crate::scalar::{int, Scalar};
use crate::signclass::{matches_pattern, SignPattern, SignSymbol};
use crate::transforms::{PrimitiveTransform, TransformChain};

/// Default entry bound for [`PatternSearch`].
pub const DEFAULT_SEARCH_BOUND: i64 = 10;
/// Default attempt budget for [`PatternSearch`].
pub const DEFAULT_SEARCH_ATTEMPTS: u64 = 1_000_000;

/// Which part of the all-ones matrix a gadget scales (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScaleTarget {
    Entry(usize, usize),
    Row(usize),
    Col(usize),
}

impl fmt::Display for ScaleTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleTarget::Entry(i, j) => write!(f, "entry ({},{})", i + 1, j + 1),
            ScaleTarget::Row(i) => write!(f, "row {}", i + 1),
            ScaleTarget::Col(j) => write!(f, "col {}", j + 1),
        }
    }
}

/// `J(c)`: the `m x n` all-ones matrix with one entry, row or column
/// multiplied by `c > 0`.
pub fn gadget_j<T: Scalar>(m: usize, n: usize, target: ScaleTarget, c: &T) -> Result<Matrix<T>> {
    if !c.is_positive() {
        return Err(Error::Precondition(format!(
            "gadget scale {c} must be positive"
        )));
    }
    let in_range = match target {
        ScaleTarget::Entry(i, j) => i < m && j < n,
        ScaleTarget::Row(i) => i < m,
        ScaleTarget::Col(j) => j < n,
    };
    if m == 0 || n == 0 || !in_range {
        return Err(Error::IndexOutOfRange(format!(
            "{target} in a {m}x{n} gadget"
        )));
    }
    let mut j: Matrix<T> = all_ones(m, n);
    for p in 0..m {
        for q in 0..n {
            let hit = match target {
                ScaleTarget::Entry(i, jj) => (p, q) == (i, jj),
                ScaleTarget::Row(i) => p == i,
                ScaleTarget::Col(jj) => q == jj,
            };
            if hit {
                j[(p, q)] = c.clone();
            }
        }
    }
    Ok(j)
}

/// The `m x n` corner of the symmetric Pascal matrix, entry
/// `C(i + j, j)` (0-based).
pub fn pascal<T: Scalar>(m: usize, n: usize) -> Matrix<T> {
    let mut a: Matrix<T> = Matrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            a[(i, j)] = if i == 0 || j == 0 {
                T::one()
            } else {
                a[(i - 1, j)].clone() + a[(i, j - 1)].clone()
            };
        }
    }
    a
}

/// The sampled Gaussian kernel `q^{(i-j)^2}` for rational `0 < q < 1`.
/// It is TP and tends to the identity pattern as `q -> 0`.
pub fn gaussian_kernel<T: Scalar>(m: usize, n: usize, q: &T) -> Result<Matrix<T>> {
    if !q.is_positive() || *q >= T::one() {
        return Err(Error::Precondition(format!(
            "kernel parameter {q} must lie in (0, 1)"
        )));
    }
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("empty shape {m}x{n}")));
    }
    Ok(Matrix::from_fn(m, n, |i, j| {
        let d = i.abs_diff(j);
        num_traits::pow(q.clone(), d * d)
    }))
}

/// Rejection sampler for SR(eps) / SSR(eps) integer matrices.
///
/// Entries are drawn from `[-bound, bound]` restricted to the sign `eps_1`
/// (zero excluded when `strict`), so every candidate already has the right
/// order-1 sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSearch {
    pub rows: usize,
    pub cols: usize,
    pub pattern: SignPattern,
    pub bound: i64,
    pub attempts: u64,
    pub seed: u64,
    pub strict: bool,
}

impl PatternSearch {
    pub fn new(rows: usize, cols: usize, pattern: SignPattern, seed: u64) -> Self {
        PatternSearch {
            rows,
            cols,
            pattern,
            bound: DEFAULT_SEARCH_BOUND,
            attempts: DEFAULT_SEARCH_ATTEMPTS,
            seed,
            strict: true,
        }
    }

    pub fn run<T: Scalar>(&self) -> Result<Matrix<T>> {
        let (m, n) = (self.rows, self.cols);
        if m == 0 || n == 0 {
            return Err(Error::Dimension(format!("empty shape {m}x{n}")));
        }
        if self.pattern.is_empty() || self.pattern.len() > m.min(n) {
            return Err(Error::InvalidPattern(format!(
                "pattern of length {} for a {m}x{n} shape",
                self.pattern.len()
            )));
        }
        if self.bound < 1 {
            return Err(Error::Precondition(
                "search bound must be at least 1".into(),
            ));
        }
        let sign = match self.pattern.order(1) {
            SignSymbol::Minus => -1,
            _ => 1,
        };
        let low = if self.strict { 1 } else { 0 };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.attempts {
            let a = Matrix::from_fn(m, n, |_, _| {
                int::<T>(sign * rng.gen_range(low..=self.bound))
            });
            if matches_pattern(&a, &self.pattern, self.strict)? {
                return Ok(a);
            }
        }
        Err(Error::SearchExhausted {
            attempts: self.attempts,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec<T> {
    /// Entry `(i, j) = nodes[i]^j`; TP for positive increasing nodes.
    Vandermonde {
        nodes: Vec<T>,
        cols: usize,
    },
    Pascal {
        rows: usize,
        cols: usize,
    },
    GadgetJ {
        rows: usize,
        cols: usize,
        target: ScaleTarget,
        c: T,
    },
    PatternSearch(PatternSearch),
}

fn self_check_tp<T: Scalar>(a: Matrix<T>, what: &str) -> Result<Matrix<T>> {
    let k = a.min_dim();
    if matches_pattern(&a, &SignPattern::all_plus(k), true)? {
        Ok(a)
    } else {
        Err(Error::GeneratorCheck(format!(
            "{what} output is not totally positive"
        )))
    }
}

pub fn generate<T: Scalar>(spec: &GeneratorSpec<T>) -> Result<Matrix<T>> {
    match spec {
        GeneratorSpec::Vandermonde { nodes, cols } => {
            self_check_tp(vandermonde(nodes, *cols)?, "vandermonde")
        }
        GeneratorSpec::Pascal { rows, cols } => {
            if *rows == 0 || *cols == 0 {
                return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
            }
            self_check_tp(pascal(*rows, *cols), "pascal")
        }
        GeneratorSpec::GadgetJ {
            rows,
            cols,
            target,
            c,
        } => gadget_j(*rows, *cols, *target, c),
        GeneratorSpec::PatternSearch(search) => search.run(),
    }
}

/// Transforms whose pushforwards generate the orbit of `(+, ..., +)`.
fn orbit_steps<T: Scalar>(m: usize, n: usize) -> Vec<PrimitiveTransform<T>> {
    let mut steps = vec![
        PrimitiveTransform::Negate,
        PrimitiveTransform::RowFlip,
        PrimitiveTransform::ColFlip,
    ];
    if m == n {
        steps.push(PrimitiveTransform::Transpose);
    }
    steps
}

/// BFS over pushforwards from `(+, ..., +)`; each pattern maps to a
/// shortest chain reaching it.
fn orbit<T: Scalar>(m: usize, n: usize) -> BTreeMap<SignPattern, Vec<PrimitiveTransform<T>>> {
    let start = SignPattern::all_plus(m.min(n));
    let mut seen = BTreeMap::from([(start.clone(), Vec::new())]);
    let mut queue = VecDeque::from([start]);
    let steps = orbit_steps::<T>(m, n);
    while let Some(p) = queue.pop_front() {
        let chain = seen[&p].clone();
        for t in &steps {
            let next = t
                .pushforward_pattern(&p)
                .expect("orbit steps act on every order");
            if !seen.contains_key(&next) {
                let mut c = chain.clone();
                c.push(t.clone());
                seen.insert(next.clone(), c);
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Sign patterns reachable from totally positive matrices by negation,
/// flips and (square) transposition.
pub fn reachable_patterns(m: usize, n: usize) -> Vec<SignPattern> {
    orbit::<crate::Rational>(m, n).into_keys().collect()
}

/// A chain taking TP matrices to SSR(eps), when `eps` is reachable.
pub fn orbit_chain<T: Scalar>(m: usize, n: usize, eps: &SignPattern) -> Option<TransformChain<T>> {
    orbit::<T>(m, n)
        .remove(eps)
        .map(|steps| TransformChain::new((m, n), steps).expect("orbit steps are legal"))
}

/// An SSR(eps) matrix: Pascal then the orbit chain for reachable `eps`,
/// otherwise a seeded [`PatternSearch`] with default budget.
pub fn construct_ssr<T: Scalar>(
    m: usize,
    n: usize,
    eps: &SignPattern,
    seed: u64,
) -> Result<Matrix<T>> {
    if eps.len() != m.min(n) || !eps.is_fully_constrained() {
        return Err(Error::InvalidPattern(format!(
            "need a pattern in {{+,-}}^{} for a {m}x{n} shape, got {eps}",
            m.min(n)
        )));
    }
    match orbit_chain::<T>(m, n, eps) {
        Some(chain) => chain.apply(&pascal(m, n)),
        None => PatternSearch::new(m, n, eps.clone(), seed).run(),
    }
}

/// Seeded random samplers used by the property suites.
pub mod sample {
    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// A small positive rational `p/q` with `p, q` in `1..=bound`.
    pub fn positive_rational<T: Scalar, R: Rng>(rng: &mut R, bound: i64) -> T {
        T::ratio(rng.gen_range(1..=bound), rng.gen_range(1..=bound))
    }

    /// Entries `p/q` with `p` in `[-bound, bound]`, `q` in `1..=bound`.
    pub fn rational_matrix<T: Scalar, R: Rng>(
        rng: &mut R,
        m: usize,
        n: usize,
        bound: i64,
    ) -> Matrix<T> {
        Matrix::from_fn(m, n, |_, _| {
            T::ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
        })
    }

    pub fn integer_matrix<T: Scalar, R: Rng>(
        rng: &mut R,
        m: usize,
        n: usize,
        bound: i64,
    ) -> Matrix<T> {
        Matrix::from_fn(m, n, |_, _| int(rng.gen_range(-bound..=bound)))
    }

    pub fn positive_diag<T: Scalar, R: Rng>(
        rng: &mut R,
        m: usize,
        n: usize,
    ) -> PrimitiveTransform<T> {
        PrimitiveTransform::DiagEquiv {
            row_scale: (0..m).map(|_| positive_rational(rng, 5)).collect(),
            col_scale: (0..n).map(|_| positive_rational(rng, 5)).collect(),
        }
    }

    /// Increasing `k`-subset of `0..n`.
    fn increasing<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
        let mut idx = rand::seq::index::sample(rng, n, k).into_vec();
        idx.sort_unstable();
        idx
    }

    /// A TP matrix: a random submatrix of a Vandermonde, Pascal or Gaussian
    /// kernel matrix, then a random positive diagonal equivalence.
    pub fn tp<T: Scalar, R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix<T> {
        let big = 3 * m.max(n);
        let rows = increasing(rng, big, m);
        let cols = increasing(rng, big, n);
        let base: Matrix<T> = match rng.gen_range(0..3) {
            0 => {
                let nodes: Vec<T> = rows.iter().map(|&r| int(r as i64 + 1)).collect();
                return positive_diag(rng, m, n)
                    .apply(&vandermonde(&nodes, n).expect("increasing positive nodes"))
                    .expect("shape matches");
            }
            1 => pascal(big, big),
            _ => {
                let q = T::ratio(rng.gen_range(1..=4), 5);
                gaussian_kernel(big, big, &q).expect("0 < q < 1")
            }
        };
        let sub = base.submatrix(&rows, &cols).expect("indices in range");
        positive_diag(rng, m, n).apply(&sub).expect("shape matches")
    }

    /// A TP matrix carried to a random pattern of the TP orbit.
    pub fn ssr<T: Scalar, R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix<T> {
        let steps = orbit_steps::<T>(m, n);
        let mut a = tp(rng, m, n);
        for _ in 0..rng.gen_range(0..=3) {
            a = steps
                .choose(rng)
                .expect("nonempty")
                .apply(&a)
                .expect("legal");
        }
        a
    }

    /// Inserts zero rows and columns at random positions around `inner`.
    pub fn zero_padded<T: Scalar, R: Rng>(
        rng: &mut R,
        inner: &Matrix<T>,
        m: usize,
        n: usize,
    ) -> Matrix<T> {
        let pick = |rng: &mut R, total: usize, keep: usize| {
            let mut idx: Vec<usize> = (0..total).collect();
            idx.shuffle(rng);
            let mut kept = idx[..keep].to_vec();
            kept.sort_unstable();
            kept
        };
        let rows = pick(rng, m, inner.rows());
        let cols = pick(rng, n, inner.cols());
        let mut a = Matrix::zeros(m, n);
        for (p, &i) in rows.iter().enumerate() {
            for (q, &j) in cols.iter().enumerate() {
                a[(i, j)] = inner[(p, q)].clone();
            }
        }
        a
    }

    /// A random SR matrix: an orbit SSR matrix, a zero-padded smaller one,
    /// a signed rank-one matrix, a pattern-search hit, or a gadget.
    pub fn sr<T: Scalar, R: Rng>(rng: &mut R, m: usize, n: usize) -> Matrix<T> {
        match rng.gen_range(0..5) {
            0 => ssr(rng, m, n),
            1 => {
                let (p, q) = (rng.gen_range(1..=m), rng.gen_range(1..=n));
                let inner = ssr(rng, p, q);
                zero_padded(rng, &inner, m, n)
            }
            2 => {
                let u: Vec<T> = (0..m).map(|_| positive_rational(rng, 6)).collect();
                let v: Vec<T> = (0..n).map(|_| positive_rational(rng, 6)).collect();
                let a = Matrix::from_fn(m, n, |i, j| u[i].clone() * v[j].clone());
                if rng.gen_bool(0.5) {
                    a.neg()
                } else {
                    a
                }
            }
            3 => {
                let pats = reachable_patterns(m, n);
                let eps = pats.choose(rng).expect("orbit is nonempty").clone();
                let search = PatternSearch {
                    bound: 4,
                    attempts: 2_000,
                    strict: false,
                    ..PatternSearch::new(m, n, eps, rng.gen())
                };
                search.run().unwrap_or_else(|_| ssr(rng, m, n))
            }
            _ => {
                let target = match rng.gen_range(0..3) {
                    0 => ScaleTarget::Entry(
                        if rng.gen_bool(0.5) { 0 } else { m - 1 },
                        if rng.gen_bool(0.5) { 0 } else { n - 1 },
                    ),
                    1 => ScaleTarget::Row(if rng.gen_bool(0.5) { 0 } else { m - 1 }),
                    _ => ScaleTarget::Col(if rng.gen_bool(0.5) { 0 } else { n - 1 }),
                };
                let c = positive_rational(rng, 8);
                gadget_j(m, n, target, &c).expect("valid gadget")
            }
        }
    }

    /// A random chain of canonical transforms. In pattern mode negation is
    /// excluded and flips come in row/column pairs.
    pub fn canonical_chain<T: Scalar, R: Rng>(
        rng: &mut R,
        m: usize,
        n: usize,
        pattern_mode: bool,
    ) -> TransformChain<T> {
        use PrimitiveTransform::*;
        let mut steps = Vec::new();
        for _ in 0..rng.gen_range(0..=4) {
            let choice = rng.gen_range(0..5);
            match (choice, pattern_mode) {
                (0, _) => steps.push(positive_diag(rng, m, n)),
                (1, false) => steps.push(Negate),
                (2, false) => steps.push(RowFlip),
                (3, false) => steps.push(ColFlip),
                (1 | 2 | 3, true) => {
                    steps.push(RowFlip);
                    steps.push(ColFlip);
                }
                _ => {
                    if m == n {
                        steps.push(Transpose);
                    } else {
                        steps.push(positive_diag(rng, m, n));
                    }
                }
            }
        }
        TransformChain::new((m, n), steps).expect("canonical steps are legal")
    }
}
