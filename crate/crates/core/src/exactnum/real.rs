//! Binary floating point at explicit precision, backed by astro-float.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{One, Zero};

use super::{ExactScalar, Field};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct HighPrecisionReal {
    v: BigFloat,
    prec: usize,
}

impl HighPrecisionReal {
    pub const DEFAULT_PRECISION: usize = 256;

    pub fn from_i64(n: i64, prec: usize) -> Self {
        HighPrecisionReal { v: BigFloat::from_i64(n, prec), prec }
    }

    pub fn from_exact(x: &ExactScalar, prec: usize) -> Self {
        let parse = |s: String| with_consts(|cc| BigFloat::parse(&s, Radix::Dec, prec + 64, RM, cc));
        let n = parse(x.numer().to_string());
        let d = parse(x.denom().to_string());
        HighPrecisionReal { v: n.div(&d, prec, RM), prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.v.exp(self.prec, RM, cc));
        HighPrecisionReal { v, prec: self.prec }
    }

    pub fn ln(&self) -> Self {
        let v = with_consts(|cc| self.v.ln(self.prec, RM, cc));
        HighPrecisionReal { v, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        HighPrecisionReal { v: self.v.abs(), prec: self.prec }
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    /// Bound on accumulated rounding: `|x| 2^(guard - prec)`.
    pub fn error_bound(&self, guard_bits: usize) -> f64 {
        let m = self.to_f64().abs().max(f64::MIN_POSITIVE);
        m * 2f64.powi(guard_bits as i32 - self.prec as i32)
    }

    /// Ordering that refuses to decide inside the combined error bound.
    pub fn cmp_with_bound(&self, other: &Self, guard_bits: usize) -> Option<Ordering> {
        let diff = (self.clone() - other.clone()).to_f64();
        let tol = self.error_bound(guard_bits) + other.error_bound(guard_bits);
        if diff.abs() <= tol {
            None
        } else {
            diff.partial_cmp(&0.0)
        }
    }

    pub fn to_decimal(&self) -> String {
        with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    /// Decimal mantissa truncated to `digits` significant digits.
    pub fn to_decimal_digits(&self, digits: usize) -> String {
        let f = self.to_f64();
        if f == 0.0 || !f.is_finite() {
            return format!("{f:e}");
        }
        let s = self.to_decimal();
        let (mant, exp) = match s.split_once('e') {
            Some((m, e)) => (m.to_string(), e.to_string()),
            None => (s.clone(), "+0".into()),
        };
        let (sign, mant) = match mant.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("", mant),
        };
        let digits_only: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
        let point = mant.find('.').unwrap_or(mant.len());
        let take = digits.max(1).min(digits_only.len());
        let lead = &digits_only[..point.min(take)];
        let tail = &digits_only[point.min(take)..take];
        if tail.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{tail}e{exp}")
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal().parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_digits(20))
    }
}

impl fmt::Display for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_digits(20))
    }
}

impl PartialEq for HighPrecisionReal {
    fn eq(&self, o: &Self) -> bool {
        self.v.cmp(&o.v) == Some(0)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident) => {
        impl $tr for HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $f(self, o: HighPrecisionReal) -> HighPrecisionReal {
                let prec = self.prec.max(o.prec);
                HighPrecisionReal { v: self.v.$f(&o.v, prec, RM), prec }
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn neg(self) -> HighPrecisionReal {
        HighPrecisionReal { v: self.v.neg(), prec: self.prec }
    }
}

impl Zero for HighPrecisionReal {
    fn zero() -> Self {
        Self::from_i64(0, Self::DEFAULT_PRECISION)
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
}

impl One for HighPrecisionReal {
    fn one() -> Self {
        Self::from_i64(1, Self::DEFAULT_PRECISION)
    }
}

impl Field for HighPrecisionReal {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n, Self::DEFAULT_PRECISION)
    }
}

#[cfg(test)]
mod tests {
    use super::super::ratio;
    use super::*;

    #[test]
    fn exact_round_trip_close() {
        let x = HighPrecisionReal::from_exact(&ratio(1, 3), 256);
        let three = HighPrecisionReal::from_i64(3, 256);
        let one = x * three - HighPrecisionReal::from_i64(1, 256);
        assert!(one.to_f64().abs() < 1e-70);
    }

    #[test]
    fn exp_ln_inverse() {
        let two = HighPrecisionReal::from_i64(2, 256);
        let back = two.ln().exp();
        let d = (back - HighPrecisionReal::from_i64(2, 256)).to_f64();
        assert!(d.abs() < 1e-70, "{d}");
        assert!((two.ln().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn bounded_compare() {
        let a = HighPrecisionReal::from_exact(&ratio(1, 7), 256);
        let b = a.clone() + HighPrecisionReal::from_exact(&ratio(1, 10i64.pow(18)), 256);
        assert_eq!(a.cmp_with_bound(&b, 8), Some(Ordering::Less));
        assert_eq!(a.cmp_with_bound(&a.clone(), 8), None);
    }

    #[test]
    fn decimal_digits() {
        let x = HighPrecisionReal::from_exact(&ratio(-2, 3), 128);
        let s = x.to_decimal_digits(5);
        assert!(s.starts_with("-6.6666e") || s.starts_with("-0.6666"), "{s}");
        assert!((x.to_f64() + 2.0 / 3.0).abs() < 1e-15);
    }
}
