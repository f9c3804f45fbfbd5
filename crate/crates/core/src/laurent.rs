//! Integer Laurent polynomials in a single variable `q`.
//!
//! Every value is kept in canonical form (no zero coefficients are stored),
//! so structural equality coincides with ring equality.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// An element of `Z[q, q^-1]`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * q^e`.
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let coeff = coeff.into();
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        Self { coeffs }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// `[n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}`, with `[0]_q = 0`.
    pub fn quantum_int(n: u32) -> Self {
        let n = i64::from(n);
        Self::from_terms((0..n).map(|k| (n - 1 - 2 * k, 1)))
    }

    /// Specialization at `q = 1`: the sum of all coefficients.
    pub fn eval_q1(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `q^exp`.
    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Image under `q -> sign * q^exp_scale`.
    pub fn substitute(&self, sign: i8, exp_scale: i64) -> Self {
        let mut p = Self::zero();
        for (e, c) in &self.coeffs {
            let mut c = c.clone();
            if sign < 0 && e.rem_euclid(2) == 1 {
                c = -c;
            }
            p.add_term(e * exp_scale, c);
        }
        p
    }

    /// Image under `q -> q^-1`.
    pub fn mirror(&self) -> Self {
        self.substitute(1, -1)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// `self += c * other`, the workhorse of sparse linear algebra.
    pub fn add_scaled(&mut self, c: &LaurentPoly, other: &LaurentPoly) {
        for (e1, c1) in &c.coeffs {
            for (e2, c2) in &other.coeffs {
                self.add_term(e1 + e2, c1 * c2);
            }
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Renders as `a_k*q^k + ...` with descending exponents, e.g. `-q^9 + 2*q^2 + 1 - q^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if *e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if *e == 1 {
                f.write_str("q")?;
            } else {
                write!(f, "q^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid Laurent polynomial at byte {pos}: {msg}")]
pub struct ParseLaurentError {
    pub pos: usize,
    pub msg: String,
}

struct TermParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> ParseLaurentError {
        ParseLaurentError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn exponent(&mut self) -> Result<i64, ParseLaurentError> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let d = self.digits().ok_or_else(|| self.err("expected exponent"))?;
        let v: i64 = d.parse().map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// One unsigned term: `c`, `q`, `q^e`, `c*q`, `c*q^e` (also `cq^e`).
    fn term(&mut self) -> Result<(i64, BigInt), ParseLaurentError> {
        let coeff = match self.digits() {
            Some(d) => Some(BigInt::from_str(&d).unwrap()),
            None => None,
        };
        if coeff.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            if self.peek() != Some(b'q') {
                return Err(self.err("expected 'q' after '*'"));
            }
        }
        if self.peek() == Some(b'q') {
            self.pos += 1;
            let exp = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.exponent()?
            } else {
                1
            };
            Ok((exp, coeff.unwrap_or_else(BigInt::one)))
        } else {
            coeff.map(|c| (0, c)).ok_or_else(|| self.err("expected coefficient or 'q'"))
        }
    }
}

impl FromStr for LaurentPoly {
    type Err = ParseLaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = TermParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let mut out = LaurentPoly::zero();
        let mut first = true;
        loop {
            let sign = match p.peek() {
                None if first => return Err(p.err("empty input")),
                None => break,
                Some(b'+') => {
                    p.pos += 1;
                    1
                }
                Some(b'-') => {
                    p.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(_) => return Err(p.err("expected '+' or '-' between terms")),
            };
            let (e, c) = p.term()?;
            out.add_term(e, c * sign);
            first = false;
        }
        Ok(out)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

impl From<BigInt> for LaurentPoly {
    fn from(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        Self::monomial(1, 0)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self * rhs;
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        out.add_scaled(self, rhs);
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $asg:ident, $am:ident) => {
        impl $asg<LaurentPoly> for LaurentPoly {
            fn $am(&mut self, rhs: LaurentPoly) {
                self.$am(&rhs);
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(mut self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$am(rhs);
                self
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(mut self, rhs: LaurentPoly) -> LaurentPoly {
                self.$am(&rhs);
                self
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                let mut out = self.clone();
                out.$am(&rhs);
                out
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a LaurentPoly> for LaurentPoly {
    fn sum<I: Iterator<Item = &'a LaurentPoly>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl Product for LaurentPoly {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

/// Coefficient as `i64` when it fits, for compact serializations.
pub fn small_coeff(c: &BigInt) -> Option<i64> {
    c.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(LaurentPoly::q() + LaurentPoly::monomial(1, -1), p("q + q^-1"));
        let x = p("3*q^2 - 7");
        assert_eq!(&x + &LaurentPoly::zero(), x);
        assert!((p("q - q^-1") + p("q^-1 - q")).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("q + q^-1") * p("q - q^-1"), p("q^2 - q^-2"));
        let x = p("-2*q^5 + q");
        assert_eq!(&x * &LaurentPoly::one(), x);
        assert_eq!(p("q + q^-1").pow(2), p("q^2 + 2 + q^-2"));
    }

    #[test]
    fn quantum_ints() {
        assert_eq!(LaurentPoly::quantum_int(2), p("q + q^-1"));
        assert!(LaurentPoly::quantum_int(0).is_zero());
        assert_eq!(LaurentPoly::quantum_int(3), p("q^2 + 1 + q^-2"));
        assert_eq!(LaurentPoly::quantum_int(1), LaurentPoly::one());
    }

    #[test]
    fn eval_at_one() {
        assert_eq!(p("q + q^-1").eval_q1(), BigInt::from(2));
        assert_eq!(LaurentPoly::zero().eval_q1(), BigInt::from(0));
        for m in 0..9u32 {
            assert_eq!(LaurentPoly::quantum_int(m).eval_q1(), BigInt::from(m));
        }
    }

    #[test]
    fn quantum_int_product_identity() {
        for a in 0..=6u32 {
            for b in 0..=6u32 {
                let lhs = LaurentPoly::quantum_int(a) * LaurentPoly::quantum_int(b);
                let rhs: LaurentPoly = (0..a.min(b))
                    .map(|k| LaurentPoly::quantum_int(a + b - 1 - 2 * k))
                    .sum();
                assert_eq!(lhs, rhs, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn rendering() {
        assert_eq!(p("q^-1 + q").to_string(), "q + q^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("-q^9 + q^5 + q^3 + q").to_string(), "-q^9 + q^5 + q^3 + q");
        assert_eq!(p("2*q^2 - 3 - 4*q^-2").to_string(), "2*q^2 - 3 - 4*q^-2");
        assert_eq!(p("-1").to_string(), "-1");
    }

    #[test]
    fn parsing_variants() {
        assert_eq!(p("2q^3"), LaurentPoly::monomial(2, 3));
        assert_eq!(p(" - q ^ -2 "), LaurentPoly::monomial(-1, -2));
        assert_eq!(p("q^+2"), LaurentPoly::monomial(1, 2));
        assert_eq!(p("q - q"), LaurentPoly::zero());
        assert_eq!(p("0"), LaurentPoly::zero());
        assert!("".parse::<LaurentPoly>().is_err());
        assert!("q q".parse::<LaurentPoly>().is_err());
        assert!("2*".parse::<LaurentPoly>().is_err());
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let x = LaurentPoly::monomial(i64::MAX, 1);
        let y = &x * &x;
        assert_eq!(y.coeff(2), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(y.to_string().parse::<LaurentPoly>().unwrap(), y);
    }

    #[test]
    fn substitution_and_mirror() {
        let x = p("q^3 + 2*q - 5 + q^-2");
        assert_eq!(x.mirror(), p("q^-3 + 2*q^-1 - 5 + q^2"));
        assert_eq!(x.substitute(-1, 1), p("-q^3 - 2*q - 5 + q^-2"));
        assert_eq!(x.shift(2), p("q^5 + 2*q^3 - 5*q^2 + 1"));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..=6, -5i64..=5), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).eval_q1(), a.eval_q1() * b.eval_q1());
            prop_assert_eq!((&a + &b).eval_q1(), a.eval_q1() + b.eval_q1());
        }

        #[test]
        fn canonical_form(a in arb_poly()) {
            prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn render_parse_roundtrip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
        }
    }
}
