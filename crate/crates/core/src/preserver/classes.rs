use crate::error::{Error, Result};
use crate::preserver::factor::{factor_preserver, Mode, PreserverVerdict};
use crate::preserver::MatrixSpaceMap;
use crate::scalar::Scalar;
use crate::signclass::SignPattern;

/// Outcome of comparing verdicts across strict and non-strict modes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassesReport {
    /// Number of (operator, mode pair) comparisons made.
    pub comparisons: usize,
    /// One line per disagreement; any entry is a bug.
    pub divergences: Vec<String>,
}

impl ClassesReport {
    pub fn is_clean(&self) -> bool {
        self.divergences.is_empty()
    }
}

fn same_verdict<T: Scalar>(a: &PreserverVerdict<T>, b: &PreserverVerdict<T>) -> bool {
    a.is_preserver() == b.is_preserver() && a.factorization() == b.factorization()
}

/// Checks that every operator gets the same verdict (and factorization) in
/// SR and SSR mode, and in SR(eps) and SSR(eps) mode for each pattern.
///
/// The 2x2 shape is refused: there the SR preservers include Hadamard
/// scalings and the bottom-row swap, which do not preserve SSR.
pub fn equal_preserver_classes_check<T: Scalar>(
    operators: &[MatrixSpaceMap<T>],
    patterns: &[SignPattern],
) -> Result<ClassesReport> {
    let mut report = ClassesReport::default();
    for (k, map) in operators.iter().enumerate() {
        if map.shape() == (2, 2) {
            return Err(Error::Precondition(
                "SR and SSR preservers differ on 2x2 matrices".into(),
            ));
        }
        let mut compare = |weak: Mode, strict: Mode, eps: Option<&SignPattern>| -> Result<()> {
            let a = factor_preserver(map, weak, eps)?;
            let b = factor_preserver(map, strict, eps)?;
            report.comparisons += 1;
            if !same_verdict(&a, &b) {
                report.divergences.push(format!(
                    "operator #{k}: {weak} {} vs {strict} {}{}",
                    verdict_word(&a),
                    verdict_word(&b),
                    eps.map(|e| format!(" (pattern {e})")).unwrap_or_default()
                ));
            }
            Ok(())
        };
        compare(Mode::Sr, Mode::Ssr, None)?;
        for eps in patterns {
            compare(Mode::SrPattern, Mode::SsrPattern, Some(eps))?;
        }
    }
    Ok(report)
}

fn verdict_word<T: Scalar>(v: &PreserverVerdict<T>) -> &'static str {
    if v.is_preserver() {
        "accepts"
    } else {
        "rejects"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{compose_to_operator, TransformChain};
    use crate::{Rational, RationalMatrix};

    fn op(shape: (usize, usize), text: &str) -> MatrixSpaceMap<Rational> {
        compose_to_operator(&TransformChain::parse(shape, text).unwrap())
    }

    #[test]
    fn canonical_and_adversarial_agree() {
        let mut l = RationalMatrix::identity(9);
        l[(0, 4)] = crate::scalar::int(1);
        let ops = vec![
            op((3, 3), "rowflip"),
            op((3, 3), "transpose,neg"),
            op((3, 3), "rowflip,colflip"),
            MatrixSpaceMap::new(3, 3, l).unwrap(),
        ];
        let pats: Vec<SignPattern> = vec!["+,+,+".parse().unwrap(), "-,+".parse().unwrap()];
        let r = equal_preserver_classes_check(&ops, &pats).unwrap();
        assert!(r.is_clean(), "{:?}", r.divergences);
        assert_eq!(r.comparisons, 12);
    }

    #[test]
    fn colflip_verdict_depends_on_pattern_not_strictness() {
        let l = op((2, 3), "colflip");
        let eps: SignPattern = "+,+".parse().unwrap();
        assert!(factor_preserver(&l, Mode::Sr, None).unwrap().is_preserver());
        assert!(!factor_preserver(&l, Mode::SrPattern, Some(&eps))
            .unwrap()
            .is_preserver());
        let r = equal_preserver_classes_check(&[l], &[eps]).unwrap();
        assert!(r.is_clean());
    }

    #[test]
    fn two_by_two_refused() {
        assert!(equal_preserver_classes_check(&[op((2, 2), "")], &[]).is_err());
    }
}
