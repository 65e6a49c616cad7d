use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactmat::Matrix;
use crate::preserver::monomial::{monomial_analysis, MonomialFailure, SupportMap};
use crate::preserver::support2x2::{support_case, word_for, Generator2x2, SupportCase};
use crate::preserver::witness::{find_witness, Witness};
use crate::preserver::MatrixSpaceMap;
use crate::scalar::Scalar;
use crate::signclass::SignPattern;
use crate::transforms::{compose_to_operator, PrimitiveTransform, TransformChain};

/// Which class the map must preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Sign regular matrices, all sign patterns.
    Sr,
    /// Strictly sign regular matrices, all sign patterns.
    Ssr,
    /// SR(eps) for a fixed pattern.
    SrPattern,
    /// SSR(eps) for a fixed pattern.
    SsrPattern,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Sr, Mode::Ssr, Mode::SrPattern, Mode::SsrPattern];

    pub fn is_pattern(self) -> bool {
        matches!(self, Mode::SrPattern | Mode::SsrPattern)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Mode::Ssr | Mode::SsrPattern)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Sr => "sr",
            Mode::Ssr => "ssr",
            Mode::SrPattern => "sreps",
            Mode::SsrPattern => "ssreps",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown mode '{s}' (sr|ssr|sreps|ssreps)")))
    }
}

/// Structural regime the decision runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Flips, transpose, negation and positive diagonal equivalence.
    General,
    /// `min(m, n) = 1`: SR reduces to SR_1 and any permutation is allowed.
    Vector,
    /// `m = n = 2` with all sign patterns: the SR_1 regime with Hadamard
    /// scaling and the bottom-row swap.
    TwoByTwo,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::General => "general",
            Regime::Vector => "vector",
            Regime::TwoByTwo => "2x2",
        }
    }

    pub fn for_query(m: usize, n: usize, mode: Mode) -> Regime {
        if m.min(n) == 1 {
            Regime::Vector
        } else if (m, n) == (2, 2) && mode == Mode::Sr {
            Regime::TwoByTwo
        } else {
            Regime::General
        }
    }
}

/// The 2x2-regime part of a factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Special2x2<T> {
    /// Entrywise positive `H` of `A -> H o A`.
    pub hadamard: Matrix<T>,
    /// Flips, transposes and swaps applied after the Hadamard scaling.
    pub word: Vec<Generator2x2>,
    /// Matching row of the case table.
    pub case: SupportCase,
}

/// A certificate that a map is a preserver, as a canonical composition.
///
/// The chain is `A -> F A E`, then transpose, then the row and column
/// permutations, then negation (see [`CanonicalFactorization::to_chain`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFactorization<T> {
    pub shape: (usize, usize),
    pub regime: Regime,
    pub negated: bool,
    /// Destination of each row; identity or reversal outside the vector
    /// regime.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub transposed: bool,
    /// Diagonal of `F`.
    pub row_scale: Vec<T>,
    /// Diagonal of `E`, normalized so the first entry is 1.
    pub col_scale: Vec<T>,
    pub special: Option<Special2x2<T>>,
}

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

fn is_reversal(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i + x + 1 == p.len())
}

impl<T: Scalar> CanonicalFactorization<T> {
    pub fn row_reversed(&self) -> bool {
        !is_identity(&self.row_perm) && is_reversal(&self.row_perm)
    }

    pub fn col_reversed(&self) -> bool {
        !is_identity(&self.col_perm) && is_reversal(&self.col_perm)
    }

    pub fn to_chain(&self) -> TransformChain<T> {
        use PrimitiveTransform::*;
        let mut steps = Vec::new();
        if let Some(special) = &self.special {
            if special.hadamard.iter().any(|x| !x.is_one()) {
                steps.push(HadamardScale(special.hadamard.clone()));
            }
            steps.extend(special.word.iter().map(|g| g.to_transform()));
        } else {
            if self
                .row_scale
                .iter()
                .chain(&self.col_scale)
                .any(|x| !x.is_one())
            {
                steps.push(DiagEquiv {
                    row_scale: self.row_scale.clone(),
                    col_scale: self.col_scale.clone(),
                });
            }
            if self.transposed {
                steps.push(Transpose);
            }
            let vector = self.regime == Regime::Vector;
            if !is_identity(&self.row_perm) {
                steps.push(
                    if vector && self.row_perm.len() > 1 && !self.row_reversed() {
                        RowPermute(self.row_perm.clone())
                    } else {
                        RowFlip
                    },
                );
            }
            if !is_identity(&self.col_perm) {
                steps.push(if vector && !self.col_reversed() {
                    ColPermute(self.col_perm.clone())
                } else {
                    ColFlip
                });
            }
        }
        if self.negated {
            steps.push(Negate);
        }
        TransformChain::new(self.shape, steps).expect("factorization steps are legal for its shape")
    }

    /// The operator of the certified composition.
    pub fn materialize(&self) -> MatrixSpaceMap<T> {
        compose_to_operator(&self.to_chain())
    }
}

impl<T: Scalar> fmt::Display for CanonicalFactorization<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chain = self.to_chain();
        if chain.steps().is_empty() {
            write!(f, "identity")
        } else {
            write!(f, "{chain}")
        }
    }
}

/// Why a map was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    NotMonomial(MonomialFailure),
    /// Pattern modes do not admit `A -> -A`.
    Negated,
    /// The support bijection is not `(i, j) -> (pi(i), tau(j))` nor its
    /// transposed form.
    NotProductForm,
    /// A row or column permutation other than identity or reversal.
    NonCanonicalPermutation {
        rows: Vec<usize>,
        cols: Vec<usize>,
    },
    /// Pattern modes need the row and column reversals together.
    UnpairedFlip {
        row_reversed: bool,
        col_reversed: bool,
    },
    /// `l_11 l_ij != l_i1 l_1j` (0-based `i`, `j`).
    ScalarsNotRankOne {
        i: usize,
        j: usize,
    },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |p: &[usize]| {
            p.iter()
                .map(|x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            RejectReason::NotMonomial(m) => write!(f, "not a signed monomial map: {m}"),
            RejectReason::Negated => write!(f, "negation does not preserve a fixed sign pattern"),
            RejectReason::NotProductForm => {
                write!(
                    f,
                    "support bijection does not act on rows and columns separately"
                )
            }
            RejectReason::NonCanonicalPermutation { rows, cols } => write!(
                f,
                "row permutation ({}) / column permutation ({}) is not identity or reversal",
                one_based(rows),
                one_based(cols)
            ),
            RejectReason::UnpairedFlip {
                row_reversed,
                col_reversed,
            } => write!(
                f,
                "unpaired flip (rows reversed: {row_reversed}, columns reversed: {col_reversed})"
            ),
            RejectReason::ScalarsNotRankOne { i, j } => write!(
                f,
                "scalars are not of the form f_i e_j: l_11 l_{0}{1} != l_{0}1 l_1{1}",
                i + 1,
                j + 1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Preserver(CanonicalFactorization<T>),
    NotPreserver {
        reason: RejectReason,
        witness: Witness<T>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreserverVerdict<T> {
    pub mode: Mode,
    pub regime: Regime,
    pub outcome: Outcome<T>,
}

impl<T: Scalar> PreserverVerdict<T> {
    pub fn is_preserver(&self) -> bool {
        matches!(self.outcome, Outcome::Preserver(_))
    }

    pub fn factorization(&self) -> Option<&CanonicalFactorization<T>> {
        match &self.outcome {
            Outcome::Preserver(f) => Some(f),
            Outcome::NotPreserver { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness<T>> {
        match &self.outcome {
            Outcome::Preserver(_) => None,
            Outcome::NotPreserver { witness, .. } => Some(witness),
        }
    }
}

/// Validates the `(mode, eps)` query for an `m x n` shape.
pub fn validate_query(m: usize, n: usize, mode: Mode, eps: Option<&SignPattern>) -> Result<()> {
    let k = m.min(n);
    match (mode.is_pattern(), eps) {
        (false, Some(_)) => Err(Error::Precondition(format!(
            "mode {mode} takes no sign pattern"
        ))),
        (true, None) => Err(Error::Precondition(format!(
            "mode {mode} requires a sign pattern"
        ))),
        (true, Some(eps)) => {
            if !eps.is_fully_constrained() {
                return Err(Error::InvalidPattern(format!(
                    "pattern {eps} contains '*'; pattern modes need signs in {{+,-}}"
                )));
            }
            if eps.len() < k.min(2) || eps.len() > k {
                return Err(Error::InvalidPattern(format!(
                    "pattern of length {} for a {m}x{n} shape (need {}..={k})",
                    eps.len(),
                    k.min(2)
                )));
            }
            Ok(())
        }
        (false, None) => Ok(()),
    }
}

/// Decides whether `map` preserves the class selected by `mode` (and `eps`),
/// returning a factorization certificate or a verified witness.
///
/// The decision is structural: monomial support, then product form of the
/// support bijection, then rank-one scalars, then the mode gates. A rejected
/// map without a witness in the search families is reported as
/// [`Error::WitnessNotFound`].
pub fn factor_preserver<T: Scalar>(
    map: &MatrixSpaceMap<T>,
    mode: Mode,
    eps: Option<&SignPattern>,
) -> Result<PreserverVerdict<T>> {
    let (m, n) = map.shape();
    validate_query(m, n, mode, eps)?;
    let regime = Regime::for_query(m, n, mode);
    let outcome = match decide(map, mode, regime) {
        Ok(f) => Outcome::Preserver(f),
        Err(reason) => {
            let witness = find_witness(map, mode, eps).map_err(|e| match e {
                Error::WitnessNotFound(msg) => Error::WitnessNotFound(format!("{reason}; {msg}")),
                other => other,
            })?;
            Outcome::NotPreserver { reason, witness }
        }
    };
    Ok(PreserverVerdict {
        mode,
        regime,
        outcome,
    })
}

/// The structural decision alone, without witness search.
pub fn decide<T: Scalar>(
    map: &MatrixSpaceMap<T>,
    mode: Mode,
    regime: Regime,
) -> std::result::Result<CanonicalFactorization<T>, RejectReason> {
    let (m, n) = map.shape();
    let support = monomial_analysis(map).map_err(RejectReason::NotMonomial)?;
    let negated = support.is_negated();
    if negated && mode.is_pattern() {
        return Err(RejectReason::Negated);
    }

    if regime == Regime::TwoByTwo {
        let targets = support.targets();
        let word = word_for(targets).expect("support of a monomial map is a bijection");
        let case = support_case(targets).expect("every bijection appears in the case table");
        return Ok(CanonicalFactorization {
            shape: (2, 2),
            regime,
            negated,
            row_perm: vec![0, 1],
            col_perm: vec![0, 1],
            transposed: false,
            row_scale: vec![T::one(); 2],
            col_scale: vec![T::one(); 2],
            special: Some(Special2x2 {
                hadamard: Matrix::from_fn(2, 2, |i, j| support.scalar(i, j).clone()),
                word,
                case,
            }),
        });
    }

    let (transposed, row_perm, col_perm) =
        product_form(&support).ok_or(RejectReason::NotProductForm)?;
    if regime == Regime::General {
        let canonical = |p: &[usize]| is_identity(p) || is_reversal(p);
        if !canonical(&row_perm) || !canonical(&col_perm) {
            return Err(RejectReason::NonCanonicalPermutation {
                rows: row_perm,
                cols: col_perm,
            });
        }
        if mode.is_pattern() {
            let row_reversed = !is_identity(&row_perm);
            let col_reversed = !is_identity(&col_perm);
            if row_reversed != col_reversed {
                return Err(RejectReason::UnpairedFlip {
                    row_reversed,
                    col_reversed,
                });
            }
        }
    }
    let (row_scale, col_scale) = rank_one_scalars(&support)?;
    Ok(CanonicalFactorization {
        shape: (m, n),
        regime,
        negated,
        row_perm,
        col_perm,
        transposed,
        row_scale,
        col_scale,
        special: None,
    })
}

/// Splits the support bijection as `(i, j) -> (rho(i), kappa(j))` or, for
/// square shapes, `(i, j) -> (rho(j), kappa(i))` (transpose first).
fn product_form<T: Scalar>(s: &SupportMap<T>) -> Option<(bool, Vec<usize>, Vec<usize>)> {
    let (m, n) = s.shape();
    let plain = {
        let rho: Vec<usize> = (0..m).map(|i| s.target(i, 0).0).collect();
        let kappa: Vec<usize> = (0..n).map(|j| s.target(0, j).1).collect();
        let ok = (0..m).all(|i| (0..n).all(|j| s.target(i, j) == (rho[i], kappa[j])));
        ok.then_some((false, rho, kappa))
    };
    plain.or_else(|| {
        if m != n {
            return None;
        }
        let rho: Vec<usize> = (0..n).map(|j| s.target(0, j).0).collect();
        let kappa: Vec<usize> = (0..m).map(|i| s.target(i, 0).1).collect();
        let ok = (0..m).all(|i| (0..n).all(|j| s.target(i, j) == (rho[j], kappa[i])));
        ok.then_some((true, rho, kappa))
    })
}

/// `l_ij = f_i e_j` with `e_1 = 1`.
fn rank_one_scalars<T: Scalar>(
    s: &SupportMap<T>,
) -> std::result::Result<(Vec<T>, Vec<T>), RejectReason> {
    let (m, n) = s.shape();
    let row_scale: Vec<T> = (0..m).map(|i| s.scalar(i, 0).clone()).collect();
    let col_scale: Vec<T> = (0..n)
        .map(|j| s.scalar(0, j).clone() / s.scalar(0, 0).clone())
        .collect();
    for i in 0..m {
        for j in 0..n {
            if *s.scalar(i, j) != row_scale[i].clone() * col_scale[j].clone() {
                return Err(RejectReason::ScalarsNotRankOne { i, j });
            }
        }
    }
    Ok((row_scale, col_scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::transforms::TransformChain;
    use crate::{Rational, RationalMatrix};

    fn op(shape: (usize, usize), text: &str) -> MatrixSpaceMap<Rational> {
        compose_to_operator(&TransformChain::parse(shape, text).unwrap())
    }

    fn pat(s: &str) -> SignPattern {
        s.parse().unwrap()
    }

    #[test]
    fn rowflip_in_two_by_two_regime() {
        let v = factor_preserver(&op((2, 2), "rowflip"), Mode::Sr, None).unwrap();
        assert_eq!(v.regime, Regime::TwoByTwo);
        let f = v.factorization().unwrap();
        let case = f.special.as_ref().unwrap().case;
        assert_eq!(case.supports[0], (2, 1));
        assert_eq!(case.listed, "A->P_2A");
        assert_eq!(f.materialize(), op((2, 2), "rowflip"));
    }

    #[test]
    fn canonical_chain_round_trip() {
        for shape in [(2, 3), (3, 3), (3, 2), (4, 4)] {
            let (m, n) = shape;
            let f: Vec<String> = (1..=m).map(|i| i.to_string()).collect();
            let e: Vec<String> = (1..=n).map(|j| format!("{}/{}", j + 2, 3)).collect();
            let text = format!("diag(F={};E={}),neg,rowflip", f.join(","), e.join(","));
            let l = op(shape, &text);
            let v = factor_preserver(&l, Mode::Sr, None).unwrap();
            let fact = v.factorization().expect("accepted");
            assert_eq!(fact.materialize(), l);
            assert!(fact.negated);
            assert_eq!(fact.col_scale[0], int(1));
        }
    }

    #[test]
    fn lone_colflip_rejected_in_pattern_mode() {
        let l = op((2, 3), "colflip");
        assert!(factor_preserver(&l, Mode::Sr, None).unwrap().is_preserver());
        let v = factor_preserver(&l, Mode::SrPattern, Some(&pat("+,+"))).unwrap();
        assert!(!v.is_preserver());
        let Outcome::NotPreserver { reason, witness } = &v.outcome else {
            unreachable!()
        };
        assert!(matches!(reason, RejectReason::UnpairedFlip { .. }));
        assert!(crate::signclass::is_tn(&witness.matrix));
    }

    #[test]
    fn paired_flip_and_transpose_accepted_in_pattern_mode() {
        for text in [
            "rowflip,colflip",
            "transpose",
            "diag(F=2,3,5;E=1,1,7),transpose,rowflip,colflip",
        ] {
            let l = op((3, 3), text);
            let v = factor_preserver(&l, Mode::SrPattern, Some(&pat("+,-,+"))).unwrap();
            assert_eq!(v.factorization().unwrap().materialize(), l, "{text}");
        }
    }

    #[test]
    fn negation_rejected_in_pattern_mode() {
        let l = op((2, 3), "neg");
        let v = factor_preserver(&l, Mode::SsrPattern, Some(&pat("+,+"))).unwrap();
        let Outcome::NotPreserver { reason, .. } = &v.outcome else {
            panic!("negation accepted")
        };
        assert_eq!(reason, &RejectReason::Negated);
    }

    #[test]
    fn query_validation() {
        let l = op((2, 3), "");
        assert!(factor_preserver(&l, Mode::SrPattern, None).is_err());
        assert!(factor_preserver(&l, Mode::Sr, Some(&pat("+,+"))).is_err());
        assert!(matches!(
            factor_preserver(&l, Mode::SrPattern, Some(&pat("+,*"))),
            Err(Error::InvalidPattern(_))
        ));
        assert!(factor_preserver(&l, Mode::SrPattern, Some(&pat("+"))).is_err());
        assert!(factor_preserver(&l, Mode::SrPattern, Some(&pat("+,+,+"))).is_err());
    }

    #[test]
    fn vector_regime_allows_any_permutation() {
        let l = op((1, 4), "diag(F=3;E=1,2,5,7),colperm(3,1,4,2)");
        let v = factor_preserver(&l, Mode::Sr, None).unwrap();
        assert_eq!(v.regime, Regime::Vector);
        assert_eq!(v.factorization().unwrap().materialize(), l);
        let v = factor_preserver(&l, Mode::SrPattern, Some(&pat("-"))).unwrap();
        assert!(v.is_preserver());
        let neg = op((3, 1), "rowperm(2,3,1),neg");
        assert!(factor_preserver(&neg, Mode::Ssr, None)
            .unwrap()
            .is_preserver());
        assert!(!factor_preserver(&neg, Mode::SrPattern, Some(&pat("+")))
            .unwrap()
            .is_preserver());
    }

    #[test]
    fn swap2_is_sr_but_not_ssr_preserver() {
        let l = op((2, 2), "swap2");
        assert!(factor_preserver(&l, Mode::Sr, None).unwrap().is_preserver());
        let v = factor_preserver(&l, Mode::Ssr, None).unwrap();
        let w = v.witness().expect("rejected in SSR mode");
        assert!(crate::signclass::is_ssr(&w.matrix, 2).unwrap());
    }

    #[test]
    fn non_rank_one_scalars() {
        let mut l = RationalMatrix::identity(6);
        l[(4, 4)] = int(2);
        let map = MatrixSpaceMap::new(2, 3, l).unwrap();
        let v = factor_preserver(&map, Mode::Sr, None).unwrap();
        let Outcome::NotPreserver { reason, .. } = &v.outcome else {
            panic!("accepted")
        };
        assert_eq!(reason, &RejectReason::ScalarsNotRankOne { i: 1, j: 1 });
    }

    #[test]
    fn mode_names() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert!("tp".parse::<Mode>().is_err());
    }
}
