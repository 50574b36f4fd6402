use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Rat> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(numer.into(), denom)))
    }

    /// Panics on a zero denominator; meant for literals.
    pub fn frac(numer: i64, denom: i64) -> Rat {
        Rat::new(numer, denom).expect("nonzero denominator")
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            Err(Error::InvalidInput("reciprocal of zero".into()))
        } else {
            Ok(Rat(self.0.recip()))
        }
    }

    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    pub fn pow(&self, exp: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Decimal expansion rounded half away from zero to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = self.0.numer().abs() * &scale;
        let (q, r) = scaled.div_rem(self.0.denom());
        let rounded = if r * 2u32 >= *self.0.denom() { q + 1u32 } else { q };
        let body = rounded.to_string();
        let (int_part, frac_part) = if digits == 0 {
            (body, String::new())
        } else if body.len() > digits {
            let split = body.len() - digits;
            (body[..split].into(), body[split..].into())
        } else {
            let mut padded = String::new();
            for _ in body.len()..digits {
                padded.push('0');
            }
            padded.push_str(&body);
            ("0".into(), padded)
        };
        let zero = int_part.bytes().all(|b| b == b'0') && frac_part.bytes().all(|b| b == b'0');
        let mut out = String::new();
        if self.is_negative() && !zero {
            out.push('-');
        }
        out.push_str(&int_part);
        if digits > 0 {
            out.push('.');
            out.push_str(&frac_part);
        }
        out
    }

    /// The rational with smallest denominator in the closed interval `[lo, hi]`.
    pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        if !lo.is_positive() && !hi.is_negative() {
            return Rat::zero();
        }
        if hi.is_negative() {
            return -Rat::simplest_between(&-hi, &-lo);
        }
        let fl = lo.floor();
        if &fl == lo {
            return fl;
        }
        let next = &fl + &Rat::one();
        if &next <= hi {
            return next;
        }
        let inner = Rat::simplest_between(
            &(hi - &fl).recip().expect("hi > floor(lo)"),
            &(lo - &fl).recip().expect("lo > floor(lo)"),
        );
        &fl + &inner.recip().expect("inner is at least one")
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_bigint(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"p"` or `"p/q"` with optional sign on `p`.
impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::InvalidInput(alloc::format!("not a rational: {s:?}"));
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            BigInt::from_str(t.strip_prefix('+').unwrap_or(t)).map_err(|_| bad())
        };
        match s.split_once('/') {
            None => Ok(Rat::from_bigint(parse_int(s)?)),
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(Error::InvalidInput(alloc::format!("zero denominator in {s:?}")));
                }
                Rat::new(parse_int(p)?, q)
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for primitive integers.
forward_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl core::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> core::iter::Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rat::int(*other)))
    }
}

/// Complex number with exact rational parts; only its squared modulus is used
/// by the stability logic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> CRat {
        CRat { re, im }
    }

    pub fn real(re: Rat) -> CRat {
        CRat { re, im: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rat::new(6, -4).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(Rat::new(0, -7).unwrap().to_string(), "0");
        assert!(Rat::new(1, 0).is_err());
    }

    #[test]
    fn parse_and_print() {
        for s in ["0", "-1/10", "3/2", "7", "-12345678901234567890/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rat>().unwrap().to_string(), "2/3");
        assert_eq!("+5".parse::<Rat>().unwrap(), Rat::int(5));
        for bad in ["", "1/0", "a", "1.5", "1/-", "--1"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(Rat::frac(1, 3).to_decimal(4), "0.3333");
        assert_eq!(Rat::frac(2, 3).to_decimal(4), "0.6667");
        assert_eq!(Rat::frac(-1, 8).to_decimal(2), "-0.13");
        assert_eq!(Rat::frac(-1, 1000).to_decimal(2), "0.00");
        assert_eq!(Rat::int(12).to_decimal(0), "12");
        assert_eq!(Rat::frac(123, 10).to_decimal(3), "12.300");
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(Rat::simplest_between(&Rat::frac(1, 3), &Rat::frac(1, 2)), Rat::frac(1, 2));
        assert_eq!(Rat::simplest_between(&Rat::frac(3, 10), &Rat::frac(4, 10)), Rat::frac(1, 3));
        assert_eq!(Rat::simplest_between(&Rat::frac(-7, 5), &Rat::frac(-6, 5)), Rat::frac(-4, 3));
        assert_eq!(Rat::simplest_between(&Rat::frac(-1, 5), &Rat::frac(1, 5)), Rat::zero());
        assert_eq!(Rat::simplest_between(&Rat::frac(22, 7), &Rat::frac(22, 7)), Rat::frac(22, 7));
    }

    #[test]
    fn complex_norm() {
        let z = CRat::new(Rat::int(3), Rat::int(-4));
        assert_eq!(z.norm_sqr(), Rat::int(25));
        assert!(CRat::default().is_zero());
    }
}
