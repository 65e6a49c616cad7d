//! Sign patterns and sign-regularity classification.
//!
//! A matrix is SR_k when, for each order `r <= k`, its nonzero `r x r`
//! minors share one sign; SSR_k additionally forbids zero minors. When every
//! minor of an order vanishes the sign is not determined and is reported as
//! `*`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactmat::{enumerate_minors, Matrix};
use crate::scalar::{Scalar, Sign};

/// Shared sign of the minors of one order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignSymbol {
    Plus,
    Minus,
    /// Every minor of the order vanishes.
    Star,
}

impl SignSymbol {
    pub fn negate(self) -> Self {
        match self {
            SignSymbol::Plus => SignSymbol::Minus,
            SignSymbol::Minus => SignSymbol::Plus,
            SignSymbol::Star => SignSymbol::Star,
        }
    }

    /// Multiplies by `(-1)^k`.
    pub fn times_parity(self, odd: bool) -> Self {
        if odd {
            self.negate()
        } else {
            self
        }
    }

    pub fn is_star(self) -> bool {
        self == SignSymbol::Star
    }

    pub fn as_char(self) -> char {
        match self {
            SignSymbol::Plus => '+',
            SignSymbol::Minus => '-',
            SignSymbol::Star => '*',
        }
    }

    /// Whether a nonzero value of sign `s` agrees with this symbol.
    pub fn admits(self, s: Sign) -> bool {
        matches!(
            (self, s),
            (_, Sign::Zero)
                | (SignSymbol::Plus, Sign::Positive)
                | (SignSymbol::Minus, Sign::Negative)
        )
    }
}

impl fmt::Display for SignSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Result of inspecting every minor of one order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderSign {
    Symbol(SignSymbol),
    /// Minors of both strict signs occur.
    Inconsistent,
}

/// Which signs occur among the minors of one order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OrderSummary {
    pub positive: bool,
    pub negative: bool,
    pub zero: bool,
}

impl OrderSummary {
    pub fn is_inconsistent(&self) -> bool {
        self.positive && self.negative
    }

    pub fn sign(&self) -> OrderSign {
        match (self.positive, self.negative) {
            (true, true) => OrderSign::Inconsistent,
            (true, false) => OrderSign::Symbol(SignSymbol::Plus),
            (false, true) => OrderSign::Symbol(SignSymbol::Minus),
            (false, false) => OrderSign::Symbol(SignSymbol::Star),
        }
    }

    /// All minors nonzero and of one sign.
    pub fn is_strict(&self) -> bool {
        !self.zero && !self.is_inconsistent()
    }
}

/// Scans the `r x r` minors, stopping at the first pair of opposite signs.
pub fn order_summary<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<OrderSummary> {
    let mut s = OrderSummary::default();
    for (_, value) in enumerate_minors(a, r)? {
        match Sign::of(&value) {
            Sign::Positive => s.positive = true,
            Sign::Negative => s.negative = true,
            Sign::Zero => s.zero = true,
        }
        if s.is_inconsistent() {
            break;
        }
    }
    Ok(s)
}

pub fn order_sign<T: Scalar>(a: &Matrix<T>, r: usize) -> Result<OrderSign> {
    Ok(order_summary(a, r)?.sign())
}

/// Per-order sign symbols `(eps_1, ..., eps_k)`; `eps_0 = +1` is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignPattern(Vec<SignSymbol>);

impl SignPattern {
    pub fn new(symbols: Vec<SignSymbol>) -> Self {
        SignPattern(symbols)
    }

    /// `(+, ..., +)` of length `k`, the totally positive pattern.
    pub fn all_plus(k: usize) -> Self {
        SignPattern(vec![SignSymbol::Plus; k])
    }

    pub fn symbols(&self) -> &[SignSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sign at order `r` (1-based).
    pub fn order(&self, r: usize) -> SignSymbol {
        self.0[r - 1]
    }

    pub fn is_fully_constrained(&self) -> bool {
        self.0.iter().all(|s| !s.is_star())
    }

    pub fn prefix(&self, k: usize) -> SignPattern {
        SignPattern(self.0[..k.min(self.0.len())].to_vec())
    }

    /// Every sign pattern in `{+, -}^k`.
    pub fn all_fully_constrained(k: usize) -> Vec<SignPattern> {
        (0..1u32 << k)
            .map(|bits| {
                SignPattern(
                    (0..k)
                        .map(|r| {
                            if bits >> r & 1 == 0 {
                                SignSymbol::Plus
                            } else {
                                SignSymbol::Minus
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    /// Accepts comma-separated `+`, `-`, `*` (also `+1`, `1`, `-1`).
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(SignPattern::default());
        }
        s.split(',')
            .map(|tok| match tok.trim() {
                "+" | "+1" | "1" => Ok(SignSymbol::Plus),
                "-" | "-1" => Ok(SignSymbol::Minus),
                "*" => Ok(SignSymbol::Star),
                other => Err(Error::InvalidPattern(format!("unknown sign '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignPattern)
    }
}

/// Classification verdict through some order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignClass {
    /// Largest `k` with the matrix SSR_k (0 if none).
    pub strict_order: usize,
    /// Largest `k` with the matrix SR_k (0 if none).
    pub regular_order: usize,
    /// Signs through `regular_order`.
    pub pattern: SignPattern,
}

impl SignClass {
    /// `"SSR_k"`, `"SR_k"` or `"not SR_1"`.
    pub fn label(&self) -> String {
        if self.regular_order == 0 {
            "not SR_1".to_string()
        } else if self.strict_order == self.regular_order {
            format!("SSR_{}", self.strict_order)
        } else {
            format!("SR_{}", self.regular_order)
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())?;
        if !self.pattern.is_empty() {
            write!(f, " pattern {}", self.pattern)?;
        }
        Ok(())
    }
}

fn check_order(a_min: usize, k: usize) -> Result<()> {
    if k == 0 || k > a_min {
        return Err(Error::OrderOutOfRange {
            order: k,
            max: a_min,
        });
    }
    Ok(())
}

/// Classifies `a` through order `up_to`, stopping at the first order whose
/// minors carry both strict signs.
pub fn classify<T: Scalar>(a: &Matrix<T>, up_to: usize) -> Result<SignClass> {
    check_order(a.min_dim(), up_to)?;
    let mut symbols = Vec::with_capacity(up_to);
    let mut strict = true;
    let mut strict_order = 0;
    for r in 1..=up_to {
        if symbols.last() == Some(&SignSymbol::Star) {
            // rank < r - 1, so every higher minor vanishes as well
            symbols.push(SignSymbol::Star);
            continue;
        }
        let summary = order_summary(a, r)?;
        match summary.sign() {
            OrderSign::Inconsistent => break,
            OrderSign::Symbol(s) => symbols.push(s),
        }
        strict &= summary.is_strict();
        if strict {
            strict_order = r;
        }
    }
    Ok(SignClass {
        strict_order,
        regular_order: symbols.len(),
        pattern: SignPattern(symbols),
    })
}

/// [`classify`] through `min(m, n)`.
pub fn classify_full<T: Scalar>(a: &Matrix<T>) -> SignClass {
    classify(a, a.min_dim()).expect("full order is in range")
}

pub fn is_sr<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<bool> {
    Ok(classify(a, k)?.regular_order == k)
}

pub fn is_ssr<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<bool> {
    Ok(classify(a, k)?.strict_order == k)
}

/// Totally positive: SSR with every sign `+`.
pub fn is_tp<T: Scalar>(a: &Matrix<T>) -> bool {
    let k = a.min_dim();
    matches_pattern(a, &SignPattern::all_plus(k), true).expect("length fits")
}

/// Totally nonnegative: SR with every sign `+` (vanishing orders allowed).
pub fn is_tn<T: Scalar>(a: &Matrix<T>) -> bool {
    let k = a.min_dim();
    matches_pattern(a, &SignPattern::all_plus(k), false).expect("length fits")
}

/// Whether `a` is SR_k(eps) (or SSR_k(eps) when `strict`), `k = eps.len()`.
///
/// On the SR side an order whose minors all vanish is compatible with any
/// queried sign. A `*` in the query only matches an order that vanishes
/// identically, and never matches in strict mode.
pub fn matches_pattern<T: Scalar>(a: &Matrix<T>, eps: &SignPattern, strict: bool) -> Result<bool> {
    if eps.len() > a.min_dim() {
        return Err(Error::InvalidPattern(format!(
            "pattern of length {} for a {}x{} matrix",
            eps.len(),
            a.rows(),
            a.cols()
        )));
    }
    for (r, &want) in (1..).zip(eps.symbols()) {
        if strict && want.is_star() {
            return Ok(false);
        }
        let summary = order_summary(a, r)?;
        let ok = match summary.sign() {
            OrderSign::Inconsistent => false,
            OrderSign::Symbol(SignSymbol::Star) => !strict,
            OrderSign::Symbol(got) => got == want && (!strict || !summary.zero),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
