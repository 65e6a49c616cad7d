mod common;

use num_rational::Rational64;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use common::*;
use signreg::exactmat::{enumerate_minors, format_matrix, minor_count, parse_matrix};
use signreg::generators::{construct_ssr, reachable_patterns, sample};
use signreg::preserver::{decide, Regime};
use signreg::signclass::{classify_full, is_sr, is_tp};
use signreg::transforms::compose_to_operator;
use signreg::vdp::sign_changes;
use signreg::{
    factor_preserver, Matrix, MatrixSpaceMap, Mode, Rational, RationalMatrix, SignPattern,
    SignSymbol, SmallRationalMatrix, TransformChain,
};

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=4)
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn determinant_matches_cofactor_oracle(seed: u64, n in 1usize..=5) {
        let mut rng = sample::rng(seed);
        let a = random_matrix(&mut rng, n, n, 9);
        let data: Vec<Vec<Rational>> = (0..n).map(|r| a.row(r).to_vec()).collect();
        prop_assert_eq!(a.determinant().unwrap(), cofactor_det(&data));
    }

    #[test]
    fn determinant_is_multiplicative(seed: u64, n in 1usize..=4) {
        let mut rng = sample::rng(seed);
        let a = random_matrix(&mut rng, n, n, 6);
        let b = random_matrix(&mut rng, n, n, 6);
        prop_assert_eq!(
            a.mul(&b).unwrap().determinant().unwrap(),
            a.determinant().unwrap() * b.determinant().unwrap()
        );
    }

    #[test]
    fn small_and_big_rationals_agree(seed: u64, n in 1usize..=4) {
        let mut rng = sample::rng(seed);
        let vals: Vec<(i64, i64)> = (0..n * n)
            .map(|_| (rng.gen_range(-5..=5), rng.gen_range(1..=5)))
            .collect();
        let big = RationalMatrix::from_fn(n, n, |i, j| q(vals[i * n + j].0, vals[i * n + j].1));
        let small = SmallRationalMatrix::from_fn(n, n, |i, j| Rational64::new(vals[i * n + j].0, vals[i * n + j].1));
        let d = small.determinant().unwrap();
        prop_assert_eq!(big.determinant().unwrap(), q(*d.numer(), *d.denom()));
    }

    #[test]
    fn minors_match_submatrix_determinants((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a = random_matrix(&mut rng, m, n, 5);
        for r in 1..=m.min(n) {
            let listed: Vec<_> = enumerate_minors(&a, r).unwrap().collect();
            prop_assert_eq!(listed.len(), minor_count(m, n, r));
            for (idx, v) in listed {
                prop_assert_eq!(oracle_minor(&a, idx.rows(), idx.cols()), v);
            }
        }
    }

    #[test]
    fn matrix_text_round_trip((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a = random_matrix(&mut rng, m, n, 20);
        prop_assert_eq!(parse_matrix::<Rational>(&format_matrix(&a)).unwrap(), a);
    }

    #[test]
    fn classification_agrees_with_oracle((m, n) in shape(), seed: u64, kind in 0u8..3) {
        let mut rng = sample::rng(seed);
        let a = match kind {
            0 => random_matrix(&mut rng, m, n, 3),
            1 => sample::sr(&mut rng, m, n),
            _ => sample::ssr(&mut rng, m, n),
        };
        let c = classify_full(&a);
        let k = m.min(n);
        prop_assert!(c.strict_order <= c.regular_order);
        for r in 1..=k {
            prop_assert_eq!(r <= c.regular_order, oracle_is_sr(&a, r), "SR_{} of\n{}", r, a);
            prop_assert_eq!(r <= c.strict_order, oracle_is_ssr(&a, r), "SSR_{} of\n{}", r, a);
        }
    }

    #[test]
    fn star_orders_propagate_upward((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a: RationalMatrix = sample::sr(&mut rng, m, n);
        let p = classify_full(&a).pattern;
        if let Some(first) = p.symbols().iter().position(|s| s.is_star()) {
            prop_assert!(p.symbols()[first..].iter().all(|s| s.is_star()), "{}", p);
        }
    }

    #[test]
    fn classification_is_transpose_invariant((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a: RationalMatrix = sample::sr(&mut rng, m, n);
        prop_assert_eq!(classify_full(&a), classify_full(&a.transpose()));
    }

    #[test]
    fn classification_is_diagonal_equivalence_invariant((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a = random_matrix(&mut rng, m, n, 3);
        let b = random_diag(&mut rng, m, n).apply(&a).unwrap();
        prop_assert_eq!(classify_full(&a), classify_full(&b));
    }

    #[test]
    fn tp_iff_all_minors_positive((m, n) in shape(), seed: u64, positive: bool) {
        let mut rng = sample::rng(seed);
        let a = if positive { sample::tp(&mut rng, m, n) } else { random_matrix(&mut rng, m, n, 4) };
        let all_positive = (1..=m.min(n)).all(|r| oracle_minor_signs(&a, r).iter().all(|&s| s == 1));
        prop_assert_eq!(is_tp(&a), all_positive);
    }

    #[test]
    fn canonical_chains_preserve_sr((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a: RationalMatrix = sample::sr(&mut rng, m, n);
        let chain = random_chain(&mut rng, m, n, false);
        prop_assert!(is_sr(&chain.apply(&a).unwrap(), m.min(n)).unwrap());
    }

    #[test]
    fn pattern_chains_preserve_the_pattern((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a: RationalMatrix = sample::sr(&mut rng, m, n);
        let eps = classify_full(&a).pattern;
        let chain = random_chain(&mut rng, m, n, true);
        prop_assert_eq!(classify_full(&chain.apply(&a).unwrap()).pattern, eps);
    }

    #[test]
    fn chain_pushforward_matches_classification((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let a: RationalMatrix = sample::ssr(&mut rng, m, n);
        let chain = random_chain(&mut rng, m, n, false);
        let eps = classify_full(&a).pattern;
        prop_assert_eq!(
            chain.pushforward_pattern(&eps).unwrap(),
            classify_full(&chain.apply(&a).unwrap()).pattern
        );
    }

    #[test]
    fn operator_of_concatenation_is_composition((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let c1 = random_chain(&mut rng, m, n, false);
        let c2 = random_chain(&mut rng, m, n, false);
        let both = compose_to_operator(&c1.concat(&c2).unwrap());
        prop_assert_eq!(both, compose_to_operator(&c2).compose(&compose_to_operator(&c1)).unwrap());
    }

    #[test]
    fn operator_agrees_with_chain_application((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let chain = random_chain(&mut rng, m, n, false);
        let a = random_matrix(&mut rng, m, n, 5);
        prop_assert_eq!(compose_to_operator(&chain).apply(&a).unwrap(), chain.apply(&a).unwrap());
    }

    #[test]
    fn chain_text_round_trip((m, n) in shape(), seed: u64) {
        let mut rng = sample::rng(seed);
        let chain = random_chain(&mut rng, m, n, false);
        let parsed = TransformChain::<Rational>::parse((m, n), &chain.to_string()).unwrap();
        prop_assert_eq!(parsed, chain);
    }

    #[test]
    fn canonical_operators_round_trip((m, n) in shape(), seed: u64, pattern_mode: bool) {
        let mut rng = sample::rng(seed);
        let chain = random_chain(&mut rng, m, n, pattern_mode);
        let op = compose_to_operator(&chain);
        let k = m.min(n);
        let (mode, eps) = if pattern_mode && k >= 1 {
            let all = SignPattern::all_fully_constrained(k);
            (Mode::SrPattern, Some(all[rng.gen_range(0..all.len())].clone()))
        } else {
            (Mode::Sr, None)
        };
        let v = factor_preserver(&op, mode, eps.as_ref()).unwrap();
        let f = v.factorization().expect("canonical chain accepted");
        prop_assert_eq!(f.materialize(), op);
    }

    #[test]
    fn rank_one_scalars_are_accepted_and_perturbations_rejected(
        (m, n) in (2usize..=4, 2usize..=4),
        seed: u64,
    ) {
        prop_assume!((m, n) != (2, 2));
        let mut rng = sample::rng(seed);
        let f: Vec<Rational> = (0..m).map(|_| random_positive(&mut rng)).collect();
        let mut e: Vec<Rational> = (0..n).map(|_| random_positive(&mut rng)).collect();
        e[0] = Rational::one();
        let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let mut l: Vec<Rational> = cells.iter().map(|&(i, j)| f[i].clone() * e[j].clone()).collect();
        let op = MatrixSpaceMap::monomial(m, n, &cells, &l).unwrap();
        prop_assert!(factor_preserver(&op, Mode::Sr, None).unwrap().is_preserver());

        let k = rng.gen_range(0..m * n);
        l[k] = l[k].clone() * q(3, 2);
        let op = MatrixSpaceMap::monomial(m, n, &cells, &l).unwrap();
        prop_assert!(!factor_preserver(&op, Mode::Sr, None).unwrap().is_preserver());
    }

    #[test]
    fn pattern_modes_gate_negation_and_lone_flips((m, n) in (2usize..=4, 2usize..=4), seed: u64) {
        let mut rng = sample::rng(seed);
        let all = SignPattern::all_fully_constrained(m.min(n));
        let eps = all[rng.gen_range(0..all.len())].clone();
        for text in ["neg", "rowflip", "colflip", "neg,rowflip,colflip"] {
            let op = compose_to_operator(&TransformChain::<Rational>::parse((m, n), text).unwrap());
            prop_assert!(decide(&op, Mode::SrPattern, Regime::General).is_err(), "{} accepted", text);
            prop_assert!(!factor_preserver(&op, Mode::SsrPattern, Some(&eps)).unwrap().is_preserver());
            prop_assert!(factor_preserver(&op, Mode::Sr, None).unwrap().is_preserver());
        }
    }

    #[test]
    fn sign_changes_invariants(xs in prop::collection::vec(-3i64..=3, 1..8), scale in prop::collection::vec(1i64..=5, 8)) {
        let x: Vec<Rational> = xs.iter().map(|&v| q(v, 1)).collect();
        let scaled: Vec<Rational> = x.iter().zip(&scale).map(|(v, s)| v.clone() * q(*s, 1)).collect();
        let neg: Vec<Rational> = x.iter().map(|v| -v.clone()).collect();
        let c = sign_changes(&x);
        prop_assert_eq!(c, oracle_sign_changes(&x));
        prop_assert_eq!(sign_changes(&scaled), c);
        prop_assert_eq!(sign_changes(&neg), c);
    }
}

#[test]
fn involutions_are_identity_operators() {
    for (m, n) in [(2, 3), (3, 3), (4, 2)] {
        let id = MatrixSpaceMap::<Rational>::identity(m, n);
        for text in ["rowflip,rowflip", "colflip,colflip", "neg,neg"] {
            let op = compose_to_operator(&TransformChain::<Rational>::parse((m, n), text).unwrap());
            assert_eq!(op, id, "{text} at {m}x{n}");
        }
        if m == n {
            let op = compose_to_operator(
                &TransformChain::<Rational>::parse((m, n), "transpose,transpose").unwrap(),
            );
            assert_eq!(op, id);
        }
    }
}

#[test]
fn reachable_pattern_instances_are_ssr() {
    for (m, n) in [(1, 3), (2, 2), (3, 4), (4, 4), (5, 5)] {
        for eps in reachable_patterns(m, n) {
            let a: RationalMatrix = construct_ssr(m, n, &eps, 0).unwrap();
            assert!(oracle_is_ssr(&a, m.min(n)));
            assert_eq!(classify_full(&a).pattern, eps);
        }
    }
}

#[test]
fn witnesses_flip_minor_signs_for_every_non_canonical_bijection_at_2x3() {
    use itertools::Itertools;
    let cells: Vec<(usize, usize)> = (0..2).cartesian_product(0..3).collect();
    let ones = vec![Rational::one(); 6];
    let mut rejected = 0;
    for targets in cells.iter().copied().permutations(6) {
        let op = MatrixSpaceMap::monomial(2, 3, &targets, &ones).unwrap();
        let v = factor_preserver(&op, Mode::Sr, None).expect("witness search succeeds");
        if let Some(w) = v.witness() {
            rejected += 1;
            assert!(oracle_is_sr(&w.matrix, 2));
            if let Some(image) = &w.image {
                assert!(!oracle_is_sr(image, 2));
            }
        }
    }
    // flips in either direction are the only accepted bijections
    assert_eq!(rejected, 720 - 4);
}

#[test]
fn vector_shapes_accept_every_permutation() {
    use itertools::Itertools;
    let ones = vec![Rational::one(); 4];
    for (m, n) in [(1, 4), (4, 1)] {
        let cells: Vec<(usize, usize)> = (0..m).cartesian_product(0..n).collect();
        for targets in cells.iter().copied().permutations(4) {
            let op = MatrixSpaceMap::monomial(m, n, &targets, &ones).unwrap();
            let v = factor_preserver(&op, Mode::Sr, None).unwrap();
            assert!(v.is_preserver());
            assert_eq!(v.factorization().unwrap().materialize(), op);
        }
    }
}

#[test]
fn sign_symbol_negation() {
    assert_eq!(SignSymbol::Plus.negate(), SignSymbol::Minus);
    assert!(Matrix::<Rational>::zeros(2, 2).iter().all(Zero::is_zero));
}
