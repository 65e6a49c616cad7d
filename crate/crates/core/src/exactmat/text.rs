//! The shared matrix text format: a header line `m n`, then `m` lines of
//! `n` whitespace-separated entries, each an integer or `p/q`.
//! Blank lines and lines starting with `#` are ignored.

use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines paired with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_entry<T: Scalar>(token: &str, line: usize) -> Result<T> {
    if let Some((_, den)) = token.split_once('/') {
        if den.trim_start_matches(['+', '-']).chars().all(|c| c == '0') && !den.is_empty() {
            return Err(parse_err(line, format!("zero denominator in '{token}'")));
        }
    }
    token
        .parse::<T>()
        .map_err(|_| parse_err(line, format!("invalid entry '{token}'")))
}

pub(crate) fn parse_dims(tokens: &[&str], line: usize) -> Result<(usize, usize)> {
    let dim = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| parse_err(line, format!("invalid dimension '{s}'")))
    };
    match tokens {
        [m, n] => Ok((dim(m)?, dim(n)?)),
        _ => Err(parse_err(line, "expected header 'm n'")),
    }
}

pub(crate) fn parse_body<'a, T: Scalar>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    rows: usize,
    cols: usize,
    header_line: usize,
) -> Result<Matrix<T>> {
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(header_line, format!("expected {rows} rows, found {r}")))?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(parse_err(
                line,
                format!("expected {cols} entries, found {}", tokens.len()),
            ));
        }
        for t in tokens {
            data.push(parse_entry(t, line)?);
        }
    }
    Matrix::new(rows, cols, data)
}

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (m, n) = parse_dims(&tokens, line)?;
    let a = parse_body(&mut lines, m, n, line)?;
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "trailing content after matrix"));
    }
    Ok(a)
}

pub fn format_matrix<T: Scalar>(a: &Matrix<T>) -> String {
    format!("{} {}\n{a}\n", a.rows(), a.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RationalMatrix;
    use num_rational::BigRational;

    #[test]
    fn parses_integers_and_fractions() {
        let a: RationalMatrix = parse_matrix("2 2\n1 1/2\n-3/4 0\n").unwrap();
        assert_eq!(a[(0, 1)], BigRational::new(1.into(), 2.into()));
        assert_eq!(a[(1, 0)], BigRational::new((-3).into(), 4.into()));
    }

    #[test]
    fn normalizes_fractions() {
        let a: RationalMatrix = parse_matrix("1 1\n4/6").unwrap();
        assert_eq!(a[(0, 0)], BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn rejects_zero_denominator() {
        let err = parse_matrix::<BigRational>("1 2\n1 3/0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                message: "zero denominator in '3/0'".into()
            }
        );
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_matrix::<BigRational>("2 2\n1 2\n3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_matrix::<BigRational>("2 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_matrix::<BigRational>("1 1\nabc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_matrix::<BigRational>("2 1\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_matrix::<BigRational>("1 1\n1\n2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(parse_matrix::<BigRational>("").is_err());
        assert!(parse_matrix::<BigRational>("0 2\n").is_err());
    }

    #[test]
    fn format_then_parse() {
        let a = RationalMatrix::from_i64_rows(&[&[1, -2, 3], &[0, 5, 7]])
            .scale(&BigRational::new(1.into(), 3.into()));
        let text = format_matrix(&a);
        assert_eq!(text, "2 3\n1/3 -2/3 1\n0 5/3 7/3\n");
        assert_eq!(parse_matrix::<BigRational>(&text).unwrap(), a);
    }
}
