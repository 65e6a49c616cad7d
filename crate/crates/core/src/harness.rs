//! Seeded property suites behind `verify-theorems`.
//!
//! Each suite samples matrices and operators, checks one invariant exactly
//! and counts passes and failures. The density suite is informational and
//! never fails a run.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmat::{enumerate_minors, Matrix};
use crate::generators::{construct_ssr, gaussian_kernel, orbit_chain, reachable_patterns, sample};
use crate::preserver::{
    equal_preserver_classes_check, factor_preserver, support_case, verify_witness, MatrixSpaceMap,
    Mode,
};
use crate::scalar::{int, Scalar};
use crate::signclass::{classify_full, is_sr, matches_pattern, SignPattern, SignSymbol};
use crate::transforms::{compose_to_operator, PrimitiveTransform, TransformChain};
use crate::vdp::vd_check_exhaustive;

/// Largest dimension the harness accepts.
pub const MAX_DIM: usize = 5;
/// Failures kept verbatim per suite.
const KEPT_FAILURES: usize = 5;

/// Deliberate defects for mutation checks of the harness itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flips the predicted order-2 sign of RowFlip in the pushforward table.
    PushforwardSign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessConfig {
    pub shapes: Vec<(usize, usize)>,
    pub samples: usize,
    /// Random chains applied to each SR sample in the soundness suite.
    pub chains_per_matrix: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            shapes: (2..=4).cartesian_product(2..=4).collect(),
            samples: 200,
            chains_per_matrix: 10,
            seed: 0,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub invariant: &'static str,
    pub informational: bool,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, invariant: &'static str) -> Self {
        SuiteReport {
            name,
            invariant,
            informational: false,
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(detail());
            }
        }
    }

    pub fn is_violated(&self) -> bool {
        !self.informational && self.failed > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl HarnessReport {
    pub fn is_clean(&self) -> bool {
        !self.suites.iter().any(SuiteReport::is_violated)
    }

    pub fn violated(&self) -> impl Iterator<Item = &SuiteReport> {
        self.suites.iter().filter(|s| s.is_violated())
    }
}

fn check_shapes(shapes: &[(usize, usize)]) -> Result<()> {
    if shapes.is_empty() {
        return Err(Error::Precondition("no shapes to test".into()));
    }
    for &(m, n) in shapes {
        if m.min(n) < 2 || m.max(n) > MAX_DIM {
            return Err(Error::Precondition(format!(
                "shape {m}x{n} outside 2..={MAX_DIM} in each dimension"
            )));
        }
    }
    Ok(())
}

/// Runs every suite over the configured shapes.
pub fn run<T: Scalar>(cfg: &HarnessConfig) -> Result<HarnessReport> {
    check_shapes(&cfg.shapes)?;
    let mut rng = sample::rng(cfg.seed);
    let mut h = Harness::<T> {
        cfg,
        operators: Vec::new(),
        _t: std::marker::PhantomData,
    };
    let suites = vec![
        h.exactmat(&mut rng)?,
        h.roundtrip(&mut rng)?,
        h.rejection(&mut rng)?,
        h.soundness(&mut rng)?,
        h.pattern_gates()?,
        h.equal_classes(&mut rng)?,
        h.two_by_two(&mut rng)?,
        h.pushforward(&mut rng)?,
        h.vd(&mut rng)?,
        h.density(&mut rng)?,
    ];
    Ok(HarnessReport {
        seed: cfg.seed,
        suites,
    })
}

struct Harness<'a, T> {
    cfg: &'a HarnessConfig,
    /// Operators from the round-trip and rejection suites, reused for the
    /// strict/non-strict comparison.
    operators: Vec<MatrixSpaceMap<T>>,
    _t: std::marker::PhantomData<T>,
}

fn random_pattern(rng: &mut ChaCha8Rng, k: usize) -> SignPattern {
    SignPattern::new(
        (0..k)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    SignSymbol::Plus
                } else {
                    SignSymbol::Minus
                }
            })
            .collect(),
    )
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn is_id_or_reversal(p: &[usize]) -> bool {
    let n = p.len();
    p.iter().enumerate().all(|(i, &v)| v == i) || p.iter().enumerate().all(|(i, &v)| v == n - 1 - i)
}

impl<T: Scalar> Harness<'_, T> {
    fn exactmat(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "exactmat",
            "det(AB) = det(A) det(B) and each minor equals the determinant of its submatrix",
        );
        for &(m, n) in &self.cfg.shapes {
            for _ in 0..self.cfg.samples / 10 {
                let k = m.min(n);
                let a: Matrix<T> = sample::rational_matrix(rng, k, k, 6);
                let b: Matrix<T> = sample::rational_matrix(rng, k, k, 6);
                let lhs = a.mul(&b)?.determinant()?;
                let rhs = a.determinant()? * b.determinant()?;
                s.record(lhs == rhs, || {
                    format!("det(AB) mismatch for\n{a}\nand\n{b}")
                });

                let c: Matrix<T> = sample::rational_matrix(rng, m, n, 6);
                let r = rng.gen_range(1..=k);
                let ok = enumerate_minors(&c, r)?.all(|(idx, v)| {
                    c.submatrix(idx.rows(), idx.cols())
                        .and_then(|s| s.determinant())
                        == Ok(v)
                });
                s.record(ok, || {
                    format!("order-{r} minors disagree with submatrix determinants of\n{c}")
                });
            }
        }
        Ok(s)
    }

    fn roundtrip(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "roundtrip",
            "canonical chains are accepted and their factorization materializes to the operator",
        );
        for &(m, n) in &self.cfg.shapes {
            let k = m.min(n);
            for sample_no in 0..self.cfg.samples {
                let pattern_mode = sample_no % 2 == 1;
                let chain: TransformChain<T> = sample::canonical_chain(rng, m, n, pattern_mode);
                let op = compose_to_operator(&chain);
                let (mode, eps) = if pattern_mode {
                    (Mode::SrPattern, Some(random_pattern(rng, k)))
                } else {
                    (Mode::Sr, None)
                };
                let v = factor_preserver(&op, mode, eps.as_ref())?;
                let ok = v.factorization().is_some_and(|f| f.materialize() == op);
                s.record(ok, || {
                    format!("{m}x{n} {mode}: chain '{chain}' not recovered")
                });
                if (m, n) != (2, 2) && sample_no % 10 == 0 {
                    self.operators.push(op);
                }
            }
        }
        Ok(s)
    }

    fn rejection(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "rejection",
            "non-canonical monomial operators are rejected with a verified witness",
        );
        for &(m, n) in &self.cfg.shapes {
            if (m, n) == (2, 2) {
                // every monomial map preserves SR_1 on 2x2; covered by the two-by-two suite
                continue;
            }
            let cells: Vec<(usize, usize)> = (0..m).cartesian_product(0..n).collect();
            for sample_no in 0..self.cfg.samples / 4 {
                let op = if sample_no % 2 == 0 {
                    let (rho, kappa) = loop {
                        let rho = random_permutation(rng, m);
                        let kappa = random_permutation(rng, n);
                        if !(is_id_or_reversal(&rho) && is_id_or_reversal(&kappa)) {
                            break (rho, kappa);
                        }
                    };
                    let targets: Vec<_> = cells.iter().map(|&(i, j)| (rho[i], kappa[j])).collect();
                    MatrixSpaceMap::monomial(m, n, &targets, &vec![T::one(); m * n])?
                } else {
                    let scalars = loop {
                        let l: Vec<T> = (0..m * n).map(|_| int(rng.gen_range(1..=5))).collect();
                        let at = |i: usize, j: usize| l[i * n + j].clone();
                        let rank_one = cells
                            .iter()
                            .all(|&(i, j)| at(i, j) * at(0, 0) == at(i, 0) * at(0, j));
                        if !rank_one {
                            break l;
                        }
                    };
                    let scaled = MatrixSpaceMap::monomial(m, n, &cells, &scalars)?;
                    let chain: TransformChain<T> = sample::canonical_chain(rng, m, n, false);
                    compose_to_operator(&chain).compose(&scaled)?
                };
                match factor_preserver(&op, Mode::Sr, None) {
                    Ok(v) => {
                        let ok = v
                            .witness()
                            .is_some_and(|w| verify_witness(&op, Mode::Sr, None, w));
                        s.record(ok, || {
                            format!("{m}x{n}: operator accepted or witness unverified\n{op}")
                        });
                    }
                    Err(e) => s.record(false, || format!("{m}x{n}: {e}")),
                }
                if sample_no % 5 == 0 {
                    self.operators.push(op);
                }
            }
        }
        Ok(s)
    }

    fn soundness(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "soundness",
            "canonical chains map SR matrices to SR matrices and SR(eps) to SR(eps)",
        );
        for &(m, n) in &self.cfg.shapes {
            let k = m.min(n);
            for _ in 0..self.cfg.samples {
                let a: Matrix<T> = sample::sr(rng, m, n);
                for _ in 0..self.cfg.chains_per_matrix {
                    let chain: TransformChain<T> = sample::canonical_chain(rng, m, n, false);
                    let b = chain.apply(&a)?;
                    s.record(is_sr(&b, k)?, || format!("'{chain}' breaks SR on\n{a}"));
                }
                let eps = classify_full(&a).pattern;
                if eps.len() == k {
                    let chain: TransformChain<T> = sample::canonical_chain(rng, m, n, true);
                    let b = chain.apply(&a)?;
                    s.record(matches_pattern(&b, &eps, false)?, || {
                        format!("'{chain}' leaves SR({eps}) on\n{a}")
                    });
                }
            }
        }
        Ok(s)
    }

    fn pattern_gates(&mut self) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "pattern-gates",
            "lone flips are rejected in SR(eps) mode while paired flips are accepted and fix eps",
        );
        for &(m, n) in &self.cfg.shapes {
            let k = m.min(n);
            let lone = ["rowflip", "colflip"].map(|t| TransformChain::<T>::parse((m, n), t));
            let paired = TransformChain::<T>::parse((m, n), "rowflip,colflip")?;
            for eps in SignPattern::all_fully_constrained(k) {
                for chain in &lone {
                    let chain = chain.as_ref().map_err(Clone::clone)?;
                    let op = compose_to_operator(chain);
                    let v = factor_preserver(&op, Mode::SrPattern, Some(&eps))?;
                    let ok = !v.is_preserver()
                        && v.witness()
                            .is_some_and(|w| verify_witness(&op, Mode::SrPattern, Some(&eps), w));
                    s.record(ok, || {
                        format!("{m}x{n} lone '{chain}' not rejected for {eps}")
                    });
                }
                let op = compose_to_operator(&paired);
                let v = factor_preserver(&op, Mode::SrPattern, Some(&eps))?;
                let fixed = paired.pushforward_pattern(&eps)? == eps;
                s.record(v.is_preserver() && fixed, || {
                    format!("{m}x{n} paired flips not accepted for {eps}")
                });
            }
        }
        Ok(s)
    }

    fn equal_classes(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "equal-classes",
            "SR and SSR modes (and SR(eps) and SSR(eps)) give identical verdicts",
        );
        let operators = std::mem::take(&mut self.operators);
        for op in &operators {
            let eps = random_pattern(rng, op.rows().min(op.cols()));
            let report = equal_preserver_classes_check(std::slice::from_ref(op), &[eps])?;
            s.record(report.is_clean(), || report.divergences.join("; "));
        }
        Ok(s)
    }

    fn two_by_two(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "two-by-two",
            "2x2 SR verdicts match the case table and a brute-force decision",
        );
        if !self.cfg.shapes.contains(&(2, 2)) {
            return Ok(s);
        }
        let cells: Vec<(usize, usize)> = (0..2).cartesian_product(0..2).collect();
        let tests: Vec<Matrix<T>> = (0..4)
            .map(|_| [0i64, 1, 2])
            .multi_cartesian_product()
            .filter(|v| v.iter().any(|&x| x != 0))
            .flat_map(|v| {
                let a = Matrix::from_fn(2, 2, |i, j| int::<T>(v[i * 2 + j]));
                [a.neg(), a]
            })
            .collect();
        let sr1 = |a: &Matrix<T>| is_sr(a, 1).expect("order 1");
        for targets in cells.iter().copied().permutations(4) {
            for signs in 0..16u32 {
                let scalars: Vec<T> = (0..4)
                    .map(|k| {
                        let c: T = sample::positive_rational(rng, 4);
                        if signs >> k & 1 == 1 {
                            -c
                        } else {
                            c
                        }
                    })
                    .collect();
                let op = MatrixSpaceMap::monomial(2, 2, &targets, &scalars)?;
                let inv = op.inverse().expect("monomial maps are invertible");
                let brute = tests
                    .iter()
                    .all(|a| sr1(&op.apply(a).expect("2x2")) && sr1(&inv.apply(a).expect("2x2")));
                let v = factor_preserver(&op, Mode::Sr, None)?;
                let case_ok = support_case(&targets).is_some()
                    && v.factorization().map_or(true, |f| f.materialize() == op);
                s.record(v.is_preserver() == brute && case_ok, || {
                    format!("2x2 monomial {targets:?} with signs {signs:04b}: verdict disagrees")
                });
            }
        }
        let swap = compose_to_operator(&TransformChain::<T>::parse((2, 2), "swap2")?);
        s.record(
            factor_preserver(&swap, Mode::Sr, None)?.is_preserver(),
            || "bottom-row swap rejected".into(),
        );
        Ok(s)
    }

    fn predicted(&self, t: &PrimitiveTransform<T>, eps: &SignPattern) -> Result<SignPattern> {
        let mut p = t.pushforward_pattern(eps)?;
        if self.cfg.fault == Some(Fault::PushforwardSign)
            && matches!(t, PrimitiveTransform::RowFlip)
            && p.len() >= 2
        {
            let mut sym = p.symbols().to_vec();
            sym[1] = sym[1].negate();
            p = SignPattern::new(sym);
        }
        Ok(p)
    }

    fn pushforward(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "pushforward",
            "the sign pushforward table agrees with classifying the transformed matrix",
        );
        for &(m, n) in &self.cfg.shapes {
            let mut transforms = vec![
                PrimitiveTransform::Negate,
                PrimitiveTransform::RowFlip,
                PrimitiveTransform::ColFlip,
            ];
            if m == n {
                transforms.push(PrimitiveTransform::Transpose);
            }
            let mut instances: Vec<Matrix<T>> = reachable_patterns(m, n)
                .iter()
                .map(|eps| construct_ssr(m, n, eps, self.cfg.seed))
                .collect::<Result<_>>()?;
            instances.extend((0..self.cfg.samples / 4).map(|_| sample::ssr(rng, m, n)));
            for a in &instances {
                let eps = classify_full(a).pattern;
                let mut all = transforms.clone();
                all.push(sample::positive_diag(rng, m, n));
                for t in &all {
                    let want = self.predicted(t, &eps)?;
                    let got = classify_full(&t.apply(a)?).pattern;
                    s.record(want == got, || {
                        format!("{m}x{n} {t}: predicted {want}, classified {got}")
                    });
                }
            }
        }
        Ok(s)
    }

    fn vd(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "variation-diminution",
            "S-(Ax) <= S-(x) for SSR A and every x in {-1,0,1}^n",
        );
        for &(m, n) in &self.cfg.shapes {
            for _ in 0..self.cfg.samples / 10 {
                let a: Matrix<T> = sample::ssr(rng, m, n);
                let r = vd_check_exhaustive(&a)?;
                s.record(r.is_clean(), || {
                    format!("{} violations on\n{a}", r.violations.len())
                });
            }
        }
        Ok(s)
    }

    fn density(&mut self, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
        let mut s = SuiteReport::new(
            "density",
            "degenerate SR(eps) matrices smoothed by Gaussian kernels and nudged toward SSR(eps) become strict",
        );
        s.informational = true;
        for &(m, n) in &self.cfg.shapes {
            let patterns = reachable_patterns(m, n);
            for _ in 0..self.cfg.samples / 10 {
                let a: Matrix<T> = sample::sr(rng, m, n);
                let Some(eps) = patterns
                    .iter()
                    .find(|e| matches_pattern(&a, e, false).unwrap_or(false))
                else {
                    continue;
                };
                if matches_pattern(&a, eps, true)? {
                    continue;
                }
                let flipped = density_flip(&a, eps)?;
                s.record(flipped, || format!("no strict perturbation found for\n{a}"));
            }
        }
        Ok(s)
    }
}

/// Searches for an SSR(eps) matrix near `a`. The Gaussian kernel smooths
/// `a` into `K_m(q) A K_n(q)`, which is strict up to its rank; rank is then
/// raised by repeatedly adding `d D_s B D_t` with geometric diagonals (each
/// direction choice is tried), or a multiple of the kernel is added instead.
fn density_flip<T: Scalar>(a: &Matrix<T>, eps: &SignPattern) -> Result<bool> {
    let (m, n) = a.shape();
    let chain = orbit_chain::<T>(m, n, eps).expect("reachable pattern");
    for e in 1..=6 {
        let q = T::ratio(1, 1 << e);
        let smooth = gaussian_kernel(m, m, &q)?
            .mul(a)?
            .mul(&gaussian_kernel(n, n, &q)?)?;
        let nudge = chain.apply(&gaussian_kernel(m, n, &q)?)?;
        for d in [2, 4, 8, 16] {
            let delta = num_traits::pow(q.clone(), d);
            if matches_pattern(&smooth.add(&nudge.scale(&delta))?, eps, true)? {
                return Ok(true);
            }
            let steps = m.min(n) - 1;
            for mask in 0..1u32 << steps {
                let mut b = smooth.clone();
                for r in 0..steps {
                    let raise = rank_raise(&b, mask >> r & 1 == 0);
                    b = b.add(&raise.scale(&num_traits::pow(delta.clone(), r + 1)))?;
                }
                if matches_pattern(&b, eps, true)? {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// `D_s B D_t` with `s_i = 2^i` and `t_j = 2^j`, or `t` reversed.
fn rank_raise<T: Scalar>(b: &Matrix<T>, increasing: bool) -> Matrix<T> {
    let n = b.cols();
    let two = |k: usize| num_traits::pow(T::one() + T::one(), k);
    Matrix::from_fn(b.rows(), n, |i, j| {
        let t = if increasing { two(j) } else { two(n - 1 - j) };
        b[(i, j)].clone() * two(i) * t
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn small() -> HarnessConfig {
        HarnessConfig {
            shapes: vec![(2, 2), (2, 3), (3, 3)],
            samples: 20,
            chains_per_matrix: 3,
            ..HarnessConfig::default()
        }
    }

    #[test]
    fn small_run_is_clean() {
        let r = run::<Rational>(&small()).unwrap();
        for suite in &r.suites {
            assert!(!suite.is_violated(), "{}: {:?}", suite.name, suite.failures);
            if suite.name != "density" && suite.name != "equal-classes" {
                assert!(suite.passed > 0, "{} ran nothing", suite.name);
            }
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let cfg = HarnessConfig {
            fault: Some(Fault::PushforwardSign),
            ..small()
        };
        let r = run::<Rational>(&cfg).unwrap();
        let bad: Vec<_> = r.violated().map(|s| s.name).collect();
        assert_eq!(bad, vec!["pushforward"]);
    }

    #[test]
    fn shape_bounds() {
        let cfg = HarnessConfig {
            shapes: vec![(1, 3)],
            ..small()
        };
        assert!(run::<Rational>(&cfg).is_err());
    }
}
