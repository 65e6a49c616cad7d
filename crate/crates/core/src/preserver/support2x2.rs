//! The 2x2 regime: all 24 support bijections of `{E_11, E_12, E_21, E_22}`
//! preserve SR_1, and each is a word in the flips, the transpose and the
//! bottom-row swap.

use std::collections::VecDeque;
use std::sync::OnceLock;

use crate::scalar::Scalar;
use crate::transforms::PrimitiveTransform;

/// Row-major slot `0..4` of a 2x2 position.
fn slot((i, j): (usize, usize)) -> usize {
    2 * i + j
}

fn position(k: usize) -> (usize, usize) {
    (k / 2, k % 2)
}

/// One row of the case table: the supports of `L(E_11), L(E_12), L(E_21),
/// L(E_22)` and the listed transform that normalizes the case to the first
/// row of its group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportCase {
    /// 1-based row number.
    pub number: usize,
    /// Group `1`, `2` or `3`.
    pub group: usize,
    /// 1-based `(p, q)` of `S_11, S_12, S_21, S_22`.
    pub supports: [(usize, usize); 4],
    pub listed: &'static str,
}

const LISTED: [&str; 8] = [
    "-",
    "A->A^T",
    "A->AP_2",
    "A->AP_2->(AP_2)^T",
    "A->P_2A->(P_2A)^T",
    "A->P_2A",
    "A->P_2AP_2",
    "A->P_2AP_2->(P_2AP_2)^T",
];

#[rustfmt::skip]
const SUPPORTS: [[(usize, usize); 4]; 24] = [
    [(1, 1), (1, 2), (2, 1), (2, 2)],
    [(1, 1), (2, 1), (1, 2), (2, 2)],
    [(1, 2), (1, 1), (2, 2), (2, 1)],
    [(1, 2), (2, 2), (1, 1), (2, 1)],
    [(2, 1), (1, 1), (2, 2), (1, 2)],
    [(2, 1), (2, 2), (1, 1), (1, 2)],
    [(2, 2), (2, 1), (1, 2), (1, 1)],
    [(2, 2), (1, 2), (2, 1), (1, 1)],

    [(1, 1), (1, 2), (2, 2), (2, 1)],
    [(1, 1), (2, 1), (2, 2), (1, 2)],
    [(1, 2), (1, 1), (2, 1), (2, 2)],
    [(1, 2), (2, 2), (2, 1), (1, 1)],
    [(2, 1), (1, 1), (1, 2), (2, 2)],
    [(2, 1), (2, 2), (1, 2), (1, 1)],
    [(2, 2), (2, 1), (1, 1), (1, 2)],
    [(2, 2), (1, 2), (1, 1), (2, 1)],

    [(1, 1), (2, 2), (1, 2), (2, 1)],
    [(1, 1), (2, 2), (2, 1), (1, 2)],
    [(1, 2), (2, 1), (1, 1), (2, 2)],
    [(1, 2), (2, 1), (2, 2), (1, 1)],
    [(2, 1), (1, 2), (1, 1), (2, 2)],
    [(2, 1), (1, 2), (2, 2), (1, 1)],
    [(2, 2), (1, 1), (2, 1), (1, 2)],
    [(2, 2), (1, 1), (1, 2), (2, 1)],
];

/// All 24 cases in table order.
pub fn support_cases() -> Vec<SupportCase> {
    SUPPORTS
        .iter()
        .enumerate()
        .map(|(k, &supports)| SupportCase {
            number: k + 1,
            group: k / 8 + 1,
            supports,
            listed: LISTED[k % 8],
        })
        .collect()
}

/// The case whose supports are `targets` (0-based, indexed by row-major
/// source slot).
pub fn support_case(targets: &[(usize, usize)]) -> Option<SupportCase> {
    let one_based: Vec<(usize, usize)> = targets.iter().map(|&(p, q)| (p + 1, q + 1)).collect();
    support_cases()
        .into_iter()
        .find(|c| c.supports.as_slice() == one_based.as_slice())
}

/// Generators of the 2x2 support group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator2x2 {
    RowFlip,
    ColFlip,
    Transpose,
    Swap2,
}

impl Generator2x2 {
    const ALL: [Generator2x2; 4] = [
        Generator2x2::RowFlip,
        Generator2x2::ColFlip,
        Generator2x2::Transpose,
        Generator2x2::Swap2,
    ];

    /// Destination slot of each source slot.
    fn action(self) -> [usize; 4] {
        let image = |(i, j): (usize, usize)| match self {
            Generator2x2::RowFlip => (1 - i, j),
            Generator2x2::ColFlip => (i, 1 - j),
            Generator2x2::Transpose => (j, i),
            Generator2x2::Swap2 => {
                if i == 1 {
                    (1, 1 - j)
                } else {
                    (i, j)
                }
            }
        };
        std::array::from_fn(|k| slot(image(position(k))))
    }

    pub fn to_transform<T: Scalar>(self) -> PrimitiveTransform<T> {
        match self {
            Generator2x2::RowFlip => PrimitiveTransform::RowFlip,
            Generator2x2::ColFlip => PrimitiveTransform::ColFlip,
            Generator2x2::Transpose => PrimitiveTransform::Transpose,
            Generator2x2::Swap2 => PrimitiveTransform::Swap2x2BottomPair,
        }
    }
}

/// Shortest generator words for every slot permutation, found by BFS in
/// the fixed generator order.
fn words() -> &'static Vec<([usize; 4], Vec<Generator2x2>)> {
    static WORDS: OnceLock<Vec<([usize; 4], Vec<Generator2x2>)>> = OnceLock::new();
    WORDS.get_or_init(|| {
        let mut found: Vec<([usize; 4], Vec<Generator2x2>)> = vec![([0, 1, 2, 3], Vec::new())];
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            let (perm, word) = found[idx].clone();
            for g in Generator2x2::ALL {
                let act = g.action();
                let next: [usize; 4] = std::array::from_fn(|k| act[perm[k]]);
                if found.iter().all(|(p, _)| *p != next) {
                    let mut w = word.clone();
                    w.push(g);
                    found.push((next, w));
                    queue.push_back(found.len() - 1);
                }
            }
        }
        found
    })
}

/// A generator word whose composite sends source slot `k` to `targets[k]`.
/// `None` when `targets` is not a bijection.
pub fn word_for(targets: &[(usize, usize)]) -> Option<Vec<Generator2x2>> {
    if targets.len() != 4 {
        return None;
    }
    let perm: Vec<usize> = targets.iter().map(|&t| slot(t)).collect();
    words()
        .iter()
        .find(|(p, _)| p.as_slice() == perm.as_slice())
        .map(|(_, w)| w.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preserver::MatrixSpaceMap;
    use crate::transforms::{compose_to_operator, TransformChain};
    use crate::Rational;

    #[test]
    fn generators_reach_all_24() {
        assert_eq!(words().len(), 24);
        assert!(words().iter().all(|(_, w)| w.len() <= 4));
    }

    #[test]
    fn table_rows_are_distinct_bijections() {
        let cases = support_cases();
        assert_eq!(cases.len(), 24);
        for c in &cases {
            let mut s = c.supports.to_vec();
            s.sort();
            assert_eq!(s, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        }
        for (a, b) in cases.iter().zip(cases.iter().skip(1)) {
            assert_ne!(a.supports, b.supports);
        }
        let mut all: Vec<_> = cases.iter().map(|c| c.supports).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
    }

    fn chain_for(listed: &str) -> TransformChain<Rational> {
        let text = match listed {
            "-" => "",
            "A->A^T" => "transpose",
            "A->AP_2" => "colflip",
            "A->AP_2->(AP_2)^T" => "colflip,transpose",
            "A->P_2A->(P_2A)^T" => "rowflip,transpose",
            "A->P_2A" => "rowflip",
            "A->P_2AP_2" => "rowflip,colflip",
            "A->P_2AP_2->(P_2AP_2)^T" => "rowflip,colflip,transpose",
            other => panic!("unknown listed transform {other}"),
        };
        TransformChain::parse((2, 2), text).unwrap()
    }

    fn supports_of(map: &MatrixSpaceMap<Rational>) -> Vec<(usize, usize)> {
        let s = crate::preserver::monomial_analysis(map).unwrap();
        s.targets().to_vec()
    }

    #[test]
    fn listed_transform_normalizes_to_group_base() {
        // base supports of groups I, II, III
        let bases = [
            vec![(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![(0, 0), (0, 1), (1, 1), (1, 0)],
            vec![(0, 0), (1, 1), (0, 1), (1, 0)],
        ];
        for case in support_cases() {
            let targets: Vec<(usize, usize)> =
                case.supports.iter().map(|&(p, q)| (p - 1, q - 1)).collect();
            let l = MatrixSpaceMap::<Rational>::from_images(2, 2, |i, j| {
                let (p, q) = targets[2 * i + j];
                crate::exactmat::unit(2, 2, p, q).unwrap()
            })
            .unwrap();
            let normalizer = compose_to_operator(&chain_for(case.listed));
            let normalized = normalizer.compose(&l).unwrap();
            assert_eq!(
                supports_of(&normalized),
                bases[case.group - 1],
                "case {}",
                case.number
            );
            assert_eq!(support_case(&targets).unwrap().number, case.number);
        }
    }

    #[test]
    fn group_bases_are_swap_and_swap_after_transpose() {
        let swap =
            compose_to_operator(&TransformChain::<Rational>::parse((2, 2), "swap2").unwrap());
        assert_eq!(support_case(&supports_of(&swap)).unwrap().number, 9);
        let t_then_swap = compose_to_operator(
            &TransformChain::<Rational>::parse((2, 2), "transpose,swap2").unwrap(),
        );
        assert_eq!(support_case(&supports_of(&t_then_swap)).unwrap().number, 17);
    }

    #[test]
    fn words_realize_their_permutation() {
        for case in support_cases() {
            let targets: Vec<(usize, usize)> =
                case.supports.iter().map(|&(p, q)| (p - 1, q - 1)).collect();
            let word = word_for(&targets).unwrap();
            let chain = TransformChain::<Rational>::new(
                (2, 2),
                word.iter().map(|g| g.to_transform()).collect(),
            )
            .unwrap();
            assert_eq!(supports_of(&compose_to_operator(&chain)), targets);
        }
    }
}
