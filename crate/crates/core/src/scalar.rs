//! Exact arithmetic in the Gaussian rationals `Q(i)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, ParseError};

/// An element `re + im*i` of `Q(i)`.
///
/// Both parts are kept in lowest terms with positive denominators, so derived
/// equality, ordering and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    /// `(rn/rd) + (in/id) i`; panics on a zero denominator.
    pub fn from_fracs(rn: i64, rd: i64, inum: i64, id: i64) -> Self {
        GaussianRational {
            re: BigRational::new(BigInt::from(rn), BigInt::from(rd)),
            im: BigRational::new(BigInt::from(inum), BigInt::from(id)),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `a^2 + b^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Exact quotient if `self / other` is a rational integer.
    pub fn as_integer_multiple_of(&self, other: &Self) -> Option<i64> {
        if other.is_zero() {
            return if self.is_zero() { Some(0) } else { None };
        }
        let q = self * &other.inv().ok()?;
        if !q.im.is_zero() || !q.re.is_integer() {
            return None;
        }
        i64::try_from(q.re.to_integer()).ok()
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self * &Self::from_ints(k, 0)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(v: BigRational) -> Self {
        GaussianRational {
            re: v,
            im: BigRational::zero(),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &'a GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational {
    re: &a.re + &b.re,
    im: &a.im + &b.im,
});
forward_binop!(Sub, sub, |a, b| GaussianRational {
    re: &a.re - &b.re,
    im: &a.im - &b.im,
});
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussianRational {
            re: &a.re * &b.re,
            im: BigRational::zero(),
        };
    }
    GaussianRational {
        re: &a.re * &b.re - &a.im * &b.im,
        im: &a.re * &b.im + &a.im * &b.re,
    }
});
forward_binop!(Div, div, |a, b| a * &b.inv().expect("division by zero"));

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -(self.clone())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&fmt_rational(&self.re));
            if self.im.is_positive() {
                out.push('+');
            }
        }
        let abs = self.im.abs();
        if self.im.is_negative() {
            out.push('-');
        }
        if abs.is_one() {
            out.push('i');
        } else {
            out.push_str(&fmt_rational(&abs));
            out.push_str("*i");
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct ScalarParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::at(self.src, self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            self.src[start..self.pos].parse().ok()
        }
    }

    /// One signed term: `[+-] (rational [*] [i] | i)`.
    fn term(&mut self, first: bool) -> Result<(BigRational, bool), ParseError> {
        self.skip_ws();
        let mut neg = false;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                neg = true;
                self.pos += 1
            }
            _ if !first => return Err(self.err("expected '+' or '-'")),
            _ => {}
        }
        self.skip_ws();
        let mut value = BigRational::one();
        let mut is_imag = false;
        if let Some(n) = self.digits() {
            value = BigRational::from_integer(n);
            self.skip_ws();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                self.skip_ws();
                let d = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                if d.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                value /= BigRational::from_integer(d);
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                if self.peek() != Some(b'i') {
                    return Err(self.err("expected 'i' after '*'"));
                }
            }
            if self.peek() == Some(b'i') {
                self.pos += 1;
                is_imag = true;
            }
        } else if self.peek() == Some(b'i') {
            self.pos += 1;
            is_imag = true;
        } else {
            return Err(self.err("expected a number or 'i'"));
        }
        if neg {
            value = -value;
        }
        Ok((value, is_imag))
    }
}

impl FromStr for GaussianRational {
    type Err = ParseError;

    /// Accepts `a/b+c/d*i` and the abbreviations produced by `Display`,
    /// plus `2i` for `2*i`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = ScalarParser {
            src: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        let mut first = true;
        loop {
            p.skip_ws();
            if p.pos >= p.bytes.len() {
                if first {
                    return Err(p.err("empty scalar"));
                }
                break;
            }
            let (v, imag) = p.term(first)?;
            if imag {
                im += v;
            } else {
                re += v;
            }
            first = false;
        }
        Ok(GaussianRational { re, im })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_pair_sums_to_real() {
        assert_eq!(g("1+i") + g("1-i"), g("2"));
    }

    #[test]
    fn rational_sum() {
        assert_eq!(g("1/2") + g("1/3"), g("5/6"));
    }

    #[test]
    fn inverse_of_one_plus_i() {
        assert_eq!(g("1+i").inv().unwrap(), g("1/2-1/2*i"));
        assert!(matches!(GaussianRational::zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn i_squared() {
        assert_eq!(GaussianRational::i() * GaussianRational::i(), g("-1"));
        assert_eq!(g("2+3i").conj(), g("2-3*i"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "2", "i", "-i", "-1/2*i", "1+i", "3/4-2*i", "-5/3+7/2*i"] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("4/6").to_string(), "2/3");
        assert_eq!(g(" 1 + 2 i ").to_string(), "1+2*i");
    }

    #[test]
    fn parse_errors_carry_column() {
        let e = "1+".parse::<GaussianRational>().unwrap_err();
        assert_eq!(e.column, 3);
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("x".parse::<GaussianRational>().is_err());
        assert!("1 2".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn integer_multiple() {
        let c = g("2i");
        assert_eq!(g("-4i").as_integer_multiple_of(&c), Some(-2));
        assert_eq!(g("i").as_integer_multiple_of(&c), None);
        assert_eq!(g("0").as_integer_multiple_of(&g("0")), Some(0));
    }
}
