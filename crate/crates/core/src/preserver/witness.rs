//! Counterexample search for rejected maps.
//!
//! Candidates come from the gadget families used in the structural
//! arguments: unit matrices and two-term combinations `E_ij + c E_kl`, and
//! the all-ones matrix with one entry, row or column scaled by `c`. The
//! scale constants are `C = {2^t, 2^-t : t = 1..=20}` in the order
//! `2, 1/2, 4, 1/4, ...`. A candidate is accepted only after the class
//! checks confirm it.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactmat::{enumerate_minors, unit, Matrix, MinorIndex};
use crate::generators::{gadget_j, orbit_chain, pascal, reachable_patterns, sample, ScaleTarget};
use crate::preserver::factor::{validate_query, Mode};
use crate::preserver::monomial::monomial_analysis;
use crate::preserver::MatrixSpaceMap;
use crate::scalar::{Scalar, Sign};
use crate::signclass::{classify_full, is_sr, is_ssr, matches_pattern, SignPattern, SignSymbol};

/// Largest exponent `t` in the scale constants `2^t`, `2^-t`.
pub const MAX_SCALE_EXPONENT: u32 = 20;

/// The scale constants in search order.
pub fn scale_constants<T: Scalar>() -> Vec<T> {
    let two = T::one() + T::one();
    let mut out = Vec::with_capacity(2 * MAX_SCALE_EXPONENT as usize);
    let mut c = T::one();
    for _ in 0..MAX_SCALE_EXPONENT {
        c = c * two.clone();
        out.push(c.clone());
        out.push(T::one() / c.clone());
    }
    out
}

/// How the witness refutes preservation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessDirection {
    /// `matrix` is in the class, `L(matrix)` is not.
    Forward,
    /// `matrix` is in the class, `L^{-1}(matrix)` is not: `L` is not onto.
    Inverse,
    /// `L` is singular and `matrix`, in the class, is outside its range.
    NotInImage,
}

impl fmt::Display for WitnessDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessDirection::Forward => "forward",
            WitnessDirection::Inverse => "inverse",
            WitnessDirection::NotInImage => "not-in-image",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<T> {
    /// A member of the source class.
    pub matrix: Matrix<T>,
    /// `L(matrix)` or `L^{-1}(matrix)`; `None` for [`WitnessDirection::NotInImage`].
    pub image: Option<Matrix<T>>,
    pub direction: WitnessDirection,
    /// Which gadget produced the witness.
    pub family: String,
}

impl<T: Scalar> Witness<T> {
    /// Up to two minors of order at most 2 of the image showing it leaves
    /// the class: a pair of opposite signs, a minor against the queried
    /// sign, or a vanishing minor in the strict 2x2 case.
    pub fn offending_minors(&self, mode: Mode, eps: Option<&SignPattern>) -> Vec<(MinorIndex, T)> {
        let Some(image) = &self.image else {
            return Vec::new();
        };
        let strict_2x2 = strict_two_by_two(image.shape(), mode);
        for r in 1..=image.min_dim().min(2) {
            let mut first_pos = None;
            let mut first_neg = None;
            for (idx, v) in enumerate_minors(image, r).expect("order in range") {
                let s = Sign::of(&v);
                if strict_2x2 && s == Sign::Zero {
                    return vec![(idx, v)];
                }
                if let Some(want) = eps.filter(|e| e.len() >= r).map(|e| e.order(r)) {
                    if want != SignSymbol::Star && !want.admits(s) {
                        return vec![(idx, v)];
                    }
                }
                match s {
                    Sign::Positive => {
                        first_pos.get_or_insert((idx, v));
                    }
                    Sign::Negative => {
                        first_neg.get_or_insert((idx, v));
                    }
                    Sign::Zero => {}
                }
                if first_pos.is_some() && first_neg.is_some() {
                    return vec![first_pos.unwrap(), first_neg.unwrap()];
                }
            }
        }
        Vec::new()
    }
}

/// In the 2x2 SSR mode the witness classes are strict.
fn strict_two_by_two(shape: (usize, usize), mode: Mode) -> bool {
    shape == (2, 2) && mode == Mode::Ssr
}

/// Membership tests used to confirm witnesses.
struct ClassTest<'a> {
    mode: Mode,
    eps: Option<&'a SignPattern>,
    shape: (usize, usize),
}

impl ClassTest<'_> {
    fn source_ok<T: Scalar>(&self, a: &Matrix<T>) -> bool {
        if strict_two_by_two(self.shape, self.mode) {
            return is_ssr(a, 2).expect("order in range");
        }
        match self.eps {
            Some(eps) => matches_pattern(a, eps, false).expect("validated pattern"),
            None => {
                let c = classify_full(a);
                c.regular_order == a.min_dim()
            }
        }
    }

    fn target_ok<T: Scalar>(&self, b: &Matrix<T>) -> bool {
        if strict_two_by_two(self.shape, self.mode) {
            return is_ssr(b, 2).expect("order in range");
        }
        let k = b.min_dim().min(2);
        match self.eps {
            Some(eps) => matches_pattern(b, &eps.prefix(k), false).expect("validated pattern"),
            None => is_sr(b, k).expect("order in range"),
        }
    }
}

type Candidates<'a, T> = Box<dyn Iterator<Item = (Matrix<T>, String)> + 'a>;

fn signed<T: Scalar>(a: Matrix<T>, negative: bool) -> Matrix<T> {
    if negative {
        a.neg()
    } else {
        a
    }
}

fn pair_family<'a, T: Scalar>(
    m: usize,
    n: usize,
    negative: bool,
    cs: &'a [T],
) -> Candidates<'a, T> {
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let singles = cells.clone().into_iter().map(move |(i, j)| {
        (
            signed(unit(m, n, i, j).expect("in range"), negative),
            format!("E_{}{}", i + 1, j + 1),
        )
    });
    let pairs = cells.clone().into_iter().flat_map(move |(i, j)| {
        let cells = cells.clone();
        cells
            .into_iter()
            .filter(move |&kl| kl != (i, j))
            .flat_map(move |(k, l)| {
                cs.iter().map(move |c| {
                    let a = unit::<T>(m, n, i, j)
                        .expect("in range")
                        .add(&unit(m, n, k, l).expect("in range").scale(c))
                        .expect("same shape");
                    (
                        signed(a, negative),
                        format!("E_{}{} + {c} E_{}{}", i + 1, j + 1, k + 1, l + 1),
                    )
                })
            })
    });
    Box::new(singles.chain(pairs))
}

fn gadget_family<'a, T: Scalar>(
    m: usize,
    n: usize,
    negative: bool,
    cs: &'a [T],
) -> Candidates<'a, T> {
    let targets: Vec<ScaleTarget> = (0..m)
        .flat_map(|i| (0..n).map(move |j| ScaleTarget::Entry(i, j)))
        .chain((0..m).map(ScaleTarget::Row))
        .chain((0..n).map(ScaleTarget::Col))
        .collect();
    Box::new(targets.into_iter().flat_map(move |t| {
        cs.iter().map(move |c| {
            (
                signed(gadget_j(m, n, t, c).expect("valid gadget"), negative),
                format!("J({c}) scaled at {t}"),
            )
        })
    }))
}

/// Sums of three distinct unit matrices.
fn triple_family<'a, T: Scalar>(m: usize, n: usize, negative: bool) -> Candidates<'a, T> {
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    Box::new(cells.into_iter().combinations(3).map(move |three| {
        let mut a = Matrix::zeros(m, n);
        for &(i, j) in &three {
            a[(i, j)] = T::one();
        }
        let name = three
            .iter()
            .map(|(i, j)| format!("E_{}{}", i + 1, j + 1))
            .collect::<Vec<_>>()
            .join(" + ");
        (signed(a, negative), name)
    }))
}

/// Positive 2x2 matrices with entries in `1..=3`.
fn small_family<'a, T: Scalar>(negative: bool) -> Candidates<'a, T> {
    Box::new((0..81u32).map(move |code| {
        let d = |k: u32| (code / 3u32.pow(k) % 3 + 1) as i64;
        let a = Matrix::from_i64_rows(&[&[d(0), d(1)], &[d(2), d(3)]]);
        (signed(a, negative), "small positive 2x2".to_string())
    }))
}

/// Seed for the fixed pool of random TP matrices.
const TP_POOL_SEED: u64 = 0x5eed;
/// Size of that pool.
const TP_POOL_SIZE: usize = 32;

/// TP matrices (Pascal, then a fixed pool of random TP matrices) carried to every reachable pattern. A non-canonical row or
/// column permutation reverses some but not all pairs, so it mixes the
/// signs of the order-2 minors of these.
fn orbit_family<'a, T: Scalar>(m: usize, n: usize) -> Candidates<'a, T> {
    let mut rng = sample::rng(TP_POOL_SEED);
    let mut bases = vec![("Pascal".to_string(), pascal::<T>(m, n))];
    bases.extend((1..=TP_POOL_SIZE).map(|k| (format!("TP pool #{k}"), sample::tp(&mut rng, m, n))));
    let chains: Vec<_> = reachable_patterns(m, n)
        .into_iter()
        .map(|eps| {
            (
                orbit_chain::<T>(m, n, &eps).expect("reachable pattern"),
                eps,
            )
        })
        .collect();
    Box::new(bases.into_iter().flat_map(move |(name, base)| {
        chains.clone().into_iter().map(move |(chain, eps)| {
            (
                chain.apply(&base).expect("shape matches"),
                format!("{name} matrix carried to pattern {eps}"),
            )
        })
    }))
}

fn candidates<'a, T: Scalar>(
    shape: (usize, usize),
    mode: Mode,
    negative: bool,
    monomial: bool,
    cs: &'a [T],
) -> Candidates<'a, T> {
    let (m, n) = shape;
    let base: Candidates<'a, T> = if monomial {
        Box::new(
            gadget_family(m, n, negative, cs)
                .chain(orbit_family(m, n))
                .chain(pair_family(m, n, negative, cs))
                .chain(triple_family(m, n, negative)),
        )
    } else {
        Box::new(
            pair_family(m, n, negative, cs)
                .chain(gadget_family(m, n, negative, cs))
                .chain(orbit_family(m, n))
                .chain(triple_family(m, n, negative)),
        )
    };
    if strict_two_by_two(shape, mode) {
        Box::new(base.chain(small_family(negative)))
    } else {
        base
    }
}

/// Searches the gadget families for a witness that `map` does not preserve
/// the class of `mode`: first forward through `L`, then through `L^{-1}`,
/// and for singular `L` outside its range.
pub fn find_witness<T: Scalar>(
    map: &MatrixSpaceMap<T>,
    mode: Mode,
    eps: Option<&SignPattern>,
) -> Result<Witness<T>> {
    let shape = map.shape();
    validate_query(shape.0, shape.1, mode, eps)?;
    let test = ClassTest { mode, eps, shape };
    let negative = eps.is_some_and(|e| e.order(1) == SignSymbol::Minus);
    let monomial = monomial_analysis(map).is_ok();
    let cs = scale_constants::<T>();

    let search = |op: &MatrixSpaceMap<T>, direction| {
        candidates(shape, mode, negative, monomial, &cs).find_map(|(a, family)| {
            let b = op.apply(&a).expect("shape matches");
            (!test.target_ok(&b) && test.source_ok(&a)).then(|| Witness {
                matrix: a,
                image: Some(b),
                direction,
                family,
            })
        })
    };

    if let Some(w) = search(map, WitnessDirection::Forward) {
        return Ok(w);
    }
    match map.inverse() {
        Some(inv) => {
            if let Some(w) = search(&inv, WitnessDirection::Inverse) {
                return Ok(w);
            }
        }
        None => {
            let found = candidates(shape, mode, negative, monomial, &cs)
                .find(|(a, _)| !map.range_contains(a) && test.source_ok(a));
            if let Some((a, family)) = found {
                return Ok(Witness {
                    matrix: a,
                    image: None,
                    direction: WitnessDirection::NotInImage,
                    family,
                });
            }
        }
    }
    Err(Error::WitnessNotFound(format!(
        "gadget families exhausted for mode {mode} on a {}x{} shape",
        shape.0, shape.1
    )))
}

/// Re-checks a witness against `map` from scratch.
pub fn verify_witness<T: Scalar>(
    map: &MatrixSpaceMap<T>,
    mode: Mode,
    eps: Option<&SignPattern>,
    w: &Witness<T>,
) -> bool {
    let test = ClassTest {
        mode,
        eps,
        shape: map.shape(),
    };
    if !test.source_ok(&w.matrix) {
        return false;
    }
    match w.direction {
        WitnessDirection::Forward => map
            .apply(&w.matrix)
            .is_ok_and(|b| Some(&b) == w.image.as_ref() && !test.target_ok(&b)),
        WitnessDirection::Inverse => map.inverse().is_some_and(|inv| {
            inv.apply(&w.matrix)
                .is_ok_and(|b| Some(&b) == w.image.as_ref() && !test.target_ok(&b))
        }),
        WitnessDirection::NotInImage => !map.range_contains(&w.matrix),
    }
}
