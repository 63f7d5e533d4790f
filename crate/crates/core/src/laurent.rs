//! Exact Laurent polynomials over the integers.
//!
//! [`LaurentPoly<N>`] stores a finite map from exponent vectors in `Z^N` to
//! nonzero arbitrary-precision coefficients. The one-variable ring `Z[q^±1]`
//! is [`LaurentPoly1`] and the two-variable ring `Z[q1^±1, q2^±1]` is
//! [`LaurentPoly2`].
//!
//! Rendering lists terms by exponent in descending lexicographic order:
//! `3*q1^2*q2^-1 + 1`. The alternate form (`{:#}`) separates factors by a
//! space instead, `q1^4 q2^2 - 1`. The parser accepts both.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Laurent polynomial in `N` commuting invertible variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly<const N: usize> {
    terms: BTreeMap<[i64; N], BigInt>,
}

/// `Z[q^±1]`.
pub type LaurentPoly1 = LaurentPoly<1>;
/// `Z[q1^±1, q2^±1]`.
pub type LaurentPoly2 = LaurentPoly<2>;

fn var_names(n: usize) -> &'static [&'static str] {
    match n {
        1 => &["q"],
        2 => &["q1", "q2"],
        _ => &[],
    }
}

impl<const N: usize> LaurentPoly<N> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(1, [0; N])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, [0; N])
    }

    pub fn monomial(c: impl Into<BigInt>, exps: [i64; N]) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c.into());
        p
    }

    /// `mono - 1`, the shape of every relation in a cyclic summand.
    pub fn binomial_minus_one(exps: [i64; N]) -> Self {
        Self::monomial(1, exps) - Self::one()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: [i64; N]) -> BigInt {
        self.terms.get(&exps).cloned().unwrap_or_default()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[i64; N], &BigInt)> {
        self.terms.iter()
    }

    /// If `self` is `c * mono`, returns the pair.
    pub fn as_monomial(&self) -> Option<([i64; N], &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exps: [i64; N], c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Applies `f` to every exponent and collects coefficients that land on
    /// the same image.
    pub fn map_exponents<const M: usize>(
        &self,
        f: impl Fn([i64; N]) -> [i64; M],
    ) -> LaurentPoly<M> {
        let mut out = LaurentPoly::<M>::zero();
        for (e, c) in &self.terms {
            out.add_term(f(*e), c.clone());
        }
        out
    }

    /// Sum of coefficients, i.e. the image under every variable going to 1.
    pub fn augment(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, sep: &str) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = var_names(N);
        for (k, (exps, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                let name = names.get(i).copied().unwrap_or("x");
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}{sep}")?;
                }
                f.write_str(&factors.join(sep))?;
            }
        }
        Ok(())
    }
}

impl LaurentPoly2 {
    pub fn q1_pow(a: i64) -> Self {
        Self::monomial(1, [a, 0])
    }

    pub fn q2_pow(b: i64) -> Self {
        Self::monomial(1, [0, b])
    }

    pub fn specialize(&self, map: SpecializationMap) -> LaurentPoly1 {
        self.map_exponents(|e| [map.exponent(e)])
    }
}

impl LaurentPoly1 {
    pub fn q_pow(a: i64) -> Self {
        Self::monomial(1, [a])
    }
}

impl<const N: usize> fmt::Display for LaurentPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if f.alternate() {
            self.fmt_with(f, " ")
        } else {
            self.fmt_with(f, "*")
        }
    }
}

impl<const N: usize> fmt::Debug for LaurentPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl<const N: usize> AddAssign<&LaurentPoly<N>> for LaurentPoly<N> {
    fn add_assign(&mut self, rhs: &LaurentPoly<N>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<const N: usize> Add<&LaurentPoly<N>> for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn add(self, rhs: &LaurentPoly<N>) -> LaurentPoly<N> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<const N: usize> Add for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn add(mut self, rhs: LaurentPoly<N>) -> LaurentPoly<N> {
        self += &rhs;
        self
    }
}

impl<const N: usize> Neg for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn neg(self) -> LaurentPoly<N> {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<const N: usize> Neg for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn neg(self) -> LaurentPoly<N> {
        -&self
    }
}

impl<const N: usize> Sub<&LaurentPoly<N>> for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn sub(self, rhs: &LaurentPoly<N>) -> LaurentPoly<N> {
        self + &(-rhs)
    }
}

impl<const N: usize> Sub for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn sub(self, rhs: LaurentPoly<N>) -> LaurentPoly<N> {
        &self - &rhs
    }
}

impl<const N: usize> Mul<&LaurentPoly<N>> for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn mul(self, rhs: &LaurentPoly<N>) -> LaurentPoly<N> {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0i64; N];
                for i in 0..N {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl<const N: usize> Mul for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn mul(self, rhs: LaurentPoly<N>) -> LaurentPoly<N> {
        &self * &rhs
    }
}

/// Where a ring map `Z[q1^±1, q2^±1] -> Z[q^±1]` sends one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Q,
    One,
}

/// A coefficient homomorphism from the two-variable ring to the one-variable
/// ring, determined by where `q1` and `q2` go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpecializationMap {
    pub q1: Target,
    pub q2: Target,
}

impl SpecializationMap {
    /// `q1, q2 -> q`: the one-variable writhe module.
    pub const WRITHE: Self = SpecializationMap {
        q1: Target::Q,
        q2: Target::Q,
    };
    /// `q1 -> 1, q2 -> q`: the linking number module.
    pub const LINKING: Self = SpecializationMap {
        q1: Target::One,
        q2: Target::Q,
    };
    /// `q1 -> q, q2 -> 1`: the self-writhe module.
    pub const SELF_WRITHE: Self = SpecializationMap {
        q1: Target::Q,
        q2: Target::One,
    };
    /// `q1, q2 -> 1`; the result only has a constant term.
    pub const AUGMENTATION: Self = SpecializationMap {
        q1: Target::One,
        q2: Target::One,
    };

    pub fn exponent(self, [a, b]: [i64; 2]) -> i64 {
        let pick = |t: Target, x: i64| if t == Target::Q { x } else { 0 };
        pick(self.q1, a) + pick(self.q2, b)
    }
}

// Parsing.

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'static [&'static str],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(
            "polynomial",
            format!("{} at byte {} in `{}`", msg.into(), self.pos, self.src),
        )
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn ident(&mut self) -> Option<&'a str> {
        let start = self.pos;
        if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            return None;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Some(&self.src[start..self.pos])
    }

    fn signed_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let d = self.digits().ok_or_else(|| self.err("expected exponent"))?;
        let v: i64 = d.parse().map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    /// One factor: an integer literal or a variable with optional exponent.
    fn factor<const N: usize>(&mut self, coef: &mut BigInt, exps: &mut [i64; N]) -> Result<()> {
        if let Some(d) = self.digits() {
            *coef *= BigInt::from_str(d).map_err(|_| self.err("bad integer"))?;
            return Ok(());
        }
        let start = self.pos;
        let name = self.ident().ok_or_else(|| self.err("expected a factor"))?;
        let slot = self.names.iter().position(|n| *n == name).ok_or_else(|| {
            self.pos = start;
            self.err(format!("unknown variable `{name}`"))
        })?;
        let save = self.pos;
        self.skip_ws();
        let e = if self.eat('^') {
            self.signed_int()?
        } else {
            self.pos = save;
            1
        };
        exps[slot] += e;
        Ok(())
    }

    fn term<const N: usize>(&mut self) -> Result<(BigInt, [i64; N])> {
        let mut coef = BigInt::one();
        let mut exps = [0i64; N];
        self.factor(&mut coef, &mut exps)?;
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.eat('*') {
                self.skip_ws();
                self.factor(&mut coef, &mut exps)?;
            } else if self.pos > save && matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric())
            {
                self.factor(&mut coef, &mut exps)?;
            } else {
                self.pos = save;
                return Ok((coef, exps));
            }
        }
    }

    fn poly<const N: usize>(&mut self) -> Result<LaurentPoly<N>> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            self.skip_ws();
            let (c, e) = self.term::<N>()?;
            out.add_term(e, if neg { -c } else { c });
            self.skip_ws();
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else if self.pos == self.src.len() {
                return Ok(out);
            } else {
                return Err(self.err("unexpected character"));
            }
        }
    }
}

impl<const N: usize> FromStr for LaurentPoly<N> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s,
            pos: 0,
            names: var_names(N),
        };
        p.poly::<N>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p2(s: &str) -> LaurentPoly2 {
        s.parse().unwrap()
    }

    fn p1(s: &str) -> LaurentPoly1 {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(p2("q1^2 + 1") + p2("-1"), p2("q1^2"));
        assert_eq!(p2("q1*q2") + LaurentPoly2::zero(), p2("q1*q2"));
        let rel = LaurentPoly2::monomial(1, [4, 2]) + LaurentPoly2::constant(-1);
        assert_eq!(rel.to_string(), "q1^4*q2^2 - 1");
        assert_eq!(format!("{rel:#}"), "q1^4 q2^2 - 1");
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            LaurentPoly2::q1_pow(1) * LaurentPoly2::q1_pow(1),
            p2("q1^2")
        );
        assert_eq!(p2("q1^2 - 1") * p2("q1^2 + 1"), p2("q1^4 - 1"));
        for r in 1..8i64 {
            let m = LaurentPoly2::q1_pow(2) * LaurentPoly2::q2_pow(2 * (r - 1));
            assert_eq!(m.as_monomial().unwrap().0, [2, 2 * r - 2]);
        }
    }

    #[test]
    fn specialize_examples() {
        let rel = p2("q1^4*q2^2 - 1");
        assert_eq!(rel.specialize(SpecializationMap::WRITHE), p1("q^6 - 1"));
        assert_eq!(
            rel.specialize(SpecializationMap::SELF_WRITHE),
            p1("q^4 - 1")
        );
        assert!(p2("q1^3*q2 - q1*q2^3")
            .specialize(SpecializationMap::WRITHE)
            .is_zero());
        assert_eq!(
            p2("3 q1^2 + q2").specialize(SpecializationMap::AUGMENTATION),
            p1("4")
        );
    }

    #[test]
    fn render_canonical_order() {
        let p = LaurentPoly2::constant(1) + LaurentPoly2::monomial(3, [2, -1]);
        assert_eq!(p.to_string(), "3*q1^2*q2^-1 + 1");
        assert_eq!(p2("3*q1^2*q2^-1 + 1"), p);
        assert_eq!(p2(" 3 * q1 ^ 2 * q2 ^ -1+1 "), p);
        assert_eq!(p2("-q2 - 2*q1").to_string(), "-2*q1 - q2");
        assert_eq!(LaurentPoly1::zero().to_string(), "0");
        assert_eq!(p1("q^-3 - 2").to_string(), "-2 + q^-3");
    }

    #[test]
    fn juxtaposed_factors() {
        assert_eq!(p2("q1^3 q2^1"), LaurentPoly2::monomial(1, [3, 1]));
        assert_eq!(p2("2 q1 q2 - 2"), p2("2*q1*q2 - 2"));
        assert_eq!(p2("q1 q1"), p2("q1^2"));
    }

    #[test]
    fn parse_errors() {
        assert!("q3".parse::<LaurentPoly2>().is_err());
        assert!("q1".parse::<LaurentPoly1>().is_err());
        assert!("q^".parse::<LaurentPoly1>().is_err());
        assert!("1 +".parse::<LaurentPoly1>().is_err());
        assert!("".parse::<LaurentPoly1>().is_err());
        assert!("(q)".parse::<LaurentPoly1>().is_err());
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let big = p1("9223372036854775807 q");
        let sq = &big * &big;
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249*q^2");
    }

    #[test]
    fn monomials_are_units() {
        for a in -4..=4 {
            for b in -4..=4 {
                let m = LaurentPoly2::monomial(1, [a, b]);
                let inv = LaurentPoly2::monomial(1, [-a, -b]);
                assert_eq!(m * inv, LaurentPoly2::one());
            }
        }
    }

    fn arb_poly2() -> impl Strategy<Value = LaurentPoly2> {
        prop::collection::vec(((-3i64..=3, -3i64..=3), -5i64..=5), 0..6).prop_map(|ts| {
            let mut p = LaurentPoly2::zero();
            for ((a, b), c) in ts {
                p.add_term([a, b], BigInt::from(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly2(), b in arb_poly2(), c in arb_poly2()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn specialize_is_ring_hom(a in arb_poly2(), b in arb_poly2()) {
            for map in [SpecializationMap::WRITHE, SpecializationMap::LINKING,
                        SpecializationMap::SELF_WRITHE, SpecializationMap::AUGMENTATION] {
                prop_assert_eq!((&a * &b).specialize(map), &a.specialize(map) * &b.specialize(map));
                prop_assert_eq!((&a + &b).specialize(map), &a.specialize(map) + &b.specialize(map));
            }
        }

        #[test]
        fn render_parse_roundtrip(a in arb_poly2()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly2>().unwrap(), a.clone());
            prop_assert_eq!(format!("{a:#}").parse::<LaurentPoly2>().unwrap(), a);
        }

        #[test]
        fn no_zero_coefficients(a in arb_poly2(), b in arb_poly2()) {
            let s = &a * &b + (&a - &b);
            prop_assert!(s.terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
