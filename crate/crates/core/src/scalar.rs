//! Exact rational scalars.
//!
//! Every coordinate, radius and margin in this crate is a `Scalar`: an
//! arbitrary-precision rational kept in canonical reduced form (positive
//! denominator, gcd 1). All predicates compare scalars exactly; floating
//! point appears only when rendering decimal output.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Sign::Zero)
    }
}

/// Exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` with `den != 0`.
    pub fn ratio(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Scalar {
        assert!(!den.is_zero(), "zero denominator");
        Scalar(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn sign(&self) -> Sign {
        match self.0.numer().sign() {
            num_bigint::Sign::Minus => Sign::Neg,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Pos,
        }
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

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.abs())
    }

    pub fn square(&self) -> Scalar {
        Scalar(&self.0 * &self.0)
    }

    pub fn half(&self) -> Scalar {
        Scalar(&self.0 / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Midpoint of two scalars.
    pub fn midpoint(a: &Scalar, b: &Scalar) -> Scalar {
        (a + b).half()
    }

    /// Largest rational of the form `k / 2^bits` whose square is `<= self`.
    /// Requires `self >= 0`. Returns 0 when `self` is 0.
    pub fn sqrt_lower(&self, bits: u32) -> Scalar {
        assert!(!self.is_negative(), "sqrt of negative");
        if self.is_zero() {
            return Scalar::zero();
        }
        let scale = BigInt::one() << (2 * bits);
        // floor(sqrt(num * 2^(2 bits) / den))
        let scaled = (self.0.numer() * &scale).div_floor(self.0.denom());
        let root = scaled.sqrt();
        Scalar::from_big(root, BigInt::one() << bits)
    }

    /// Smallest integer `k >= 0` with `k^2 >= self`. Requires `self >= 0`.
    pub fn int_sqrt_upper(&self) -> BigInt {
        assert!(!self.is_negative(), "sqrt of negative");
        if self.is_zero() {
            return BigInt::zero();
        }
        let q = self.0.numer().div_ceil(self.0.denom());
        let mut k = q.sqrt();
        while Scalar::from_big(&k * &k, BigInt::one()) < *self {
            k += 1;
        }
        k
    }

    /// Exact power of ten (negative exponents give 1/10^k).
    pub fn exp10(k: i32) -> Scalar {
        let pow = BigInt::from(10).pow(k.unsigned_abs());
        if k >= 0 {
            Scalar::from_big(pow, BigInt::one())
        } else {
            Scalar::from_big(BigInt::one(), pow)
        }
    }

    /// Decimal approximation of `sqrt(self)` with `sig` significant digits
    /// (computed from a truncation 30 digits deep). Requires `self >= 0`.
    pub fn sqrt_decimal(&self, sig: usize) -> String {
        assert!(!self.is_negative(), "sqrt of negative");
        if self.is_zero() {
            return "0".to_string();
        }
        let k: u32 = 30;
        let pow = BigInt::from(10).pow(2 * k);
        let scaled = (self.numer() * pow).div_floor(self.denom());
        let root = scaled.sqrt();
        Scalar::from_big(root, BigInt::from(10).pow(k)).to_decimal(sig)
    }

    /// Decimal approximation with the given number of significant digits.
    /// Rounds half away from zero; trailing fractional zeros are trimmed.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig > 0);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.0.numer().abs();
        let den = self.0.denom().clone();
        // exponent e with 10^e <= |x| < 10^(e+1)
        let ten = BigInt::from(10);
        let mut e: i64 = 0;
        if num >= den {
            let mut d = &den * &ten;
            while d <= num {
                d *= &ten;
                e += 1;
            }
        } else {
            let mut n = &num * &ten;
            e = -1;
            while n < den {
                n *= &ten;
                e -= 1;
            }
        }
        // digits = round(|x| * 10^(sig-1-e))
        let shift = sig as i64 - 1 - e;
        let (mut n, d) = if shift >= 0 {
            (num * ten.pow(shift as u32), den)
        } else {
            (num, den * ten.pow((-shift) as u32))
        };
        // round half away from zero
        n = (&n * BigInt::from(2) + &d).div_floor(&(&d * BigInt::from(2)));
        let mut digits = n.to_string();
        if digits.len() > sig {
            // rounding carried over (e.g. 999.95 -> 1000); drop the extra digit
            digits.truncate(sig);
            e += 1;
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if e >= 0 {
            let ip = (e + 1) as usize;
            if ip >= digits.len() {
                out.push_str(&digits);
                for _ in 0..(ip - digits.len()) {
                    out.push('0');
                }
            } else {
                out.push_str(&digits[..ip]);
                let frac = digits[ip..].trim_end_matches('0');
                if !frac.is_empty() {
                    out.push('.');
                    out.push_str(frac);
                }
            }
        } else {
            out.push_str("0.");
            for _ in 0..((-e - 1) as usize) {
                out.push('0');
            }
            out.push_str(digits.trim_end_matches('0'));
        }
        out
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Parse error for `Scalar` text form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal {0:?}")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseScalarError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::from_big(num, den))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        Scalar(self.0 / rhs.0)
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}
