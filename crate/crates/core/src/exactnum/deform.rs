//! Truncated Laurent series in a deformation parameter.
//!
//! Several closed-form coefficients are ratios that read `0/0` at the edge
//! of their index range. We evaluate them by shifting one integer parameter
//! `n -> n + eps` and taking the `eps -> 0` limit. With `d = eps ln q`,
//! `q^(c + k eps) = q^c exp(k d)`, so every quantity is a Laurent series in
//! `d` with rational coefficients and the limit is its constant term.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{int, ExactScalar, Field};
use crate::error::{Error, Result};

/// `c + d * eps`, an integer exponent with an infinitesimal part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub c: i64,
    pub d: i64,
}

impl Exponent {
    pub fn var(c: i64) -> Self {
        Exponent { c, d: 1 }
    }
}

impl From<i64> for Exponent {
    fn from(c: i64) -> Self {
        Exponent { c, d: 0 }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent { c: self.c + o.c, d: self.d + o.d }
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        Exponent { c: self.c - o.c, d: self.d - o.d }
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent { c: -self.c, d: -self.d }
    }
}

impl Add<i64> for Exponent {
    type Output = Exponent;
    fn add(self, o: i64) -> Exponent {
        self + Exponent::from(o)
    }
}

impl Sub<i64> for Exponent {
    type Output = Exponent;
    fn sub(self, o: i64) -> Exponent {
        self - Exponent::from(o)
    }
}

impl Add<Exponent> for i64 {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent::from(self) + o
    }
}

impl Sub<Exponent> for i64 {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        Exponent::from(self) - o
    }
}

impl Mul<Exponent> for i64 {
    type Output = Exponent;
    fn mul(self, o: Exponent) -> Exponent {
        Exponent { c: self * o.c, d: self * o.d }
    }
}

/// `sum_k terms[k] d^(val + k)`, known for all orders below `val + terms.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Deformed {
    val: i32,
    terms: Vec<ExactScalar>,
}

impl Deformed {
    pub fn constant(c: ExactScalar, order: usize) -> Self {
        let mut terms = vec![ExactScalar::zero(); order];
        terms[0] = c;
        Deformed { val: 0, terms }
    }

    fn known(&self) -> i32 {
        self.val + self.terms.len() as i32
    }

    fn coeff(&self, k: i32) -> ExactScalar {
        if k < self.val {
            ExactScalar::zero()
        } else {
            self.terms[(k - self.val) as usize].clone()
        }
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Zero::is_zero)
    }

    /// Constant term, provided no pole survives.
    pub fn limit(&self) -> Result<ExactScalar> {
        if self.known() <= 0 {
            return Err(Error::SingularCoefficient("deformation order exhausted".into()));
        }
        if (self.val..0).any(|k| !self.coeff(k).is_zero()) {
            return Err(Error::SingularCoefficient("pole in deformation limit".into()));
        }
        Ok(self.coeff(0))
    }

    pub fn checked_div(&self, o: &Deformed) -> Result<Deformed> {
        let t = o
            .terms
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::SingularCoefficient("division by an exact zero".into()))?;
        let b = &o.terms[t..];
        let len = self.terms.len().min(b.len());
        let b0 = &b[0];
        let mut inv: Vec<ExactScalar> = Vec::with_capacity(len);
        inv.push(ExactScalar::one() / b0);
        for k in 1..len {
            let mut s = ExactScalar::zero();
            for j in 1..=k {
                s += &b[j] * &inv[k - j];
            }
            inv.push(-s / b0);
        }
        let terms = (0..len)
            .map(|k| (0..=k).map(|j| &self.terms[j] * &inv[k - j]).sum())
            .collect();
        Ok(Deformed { val: self.val - o.val - t as i32, terms })
    }
}

impl Add for &Deformed {
    type Output = Deformed;
    fn add(self, o: &Deformed) -> Deformed {
        let val = self.val.min(o.val);
        let end = self.known().min(o.known());
        let terms = (val..end).map(|k| self.coeff(k) + o.coeff(k)).collect();
        Deformed { val, terms }
    }
}

impl Sub for &Deformed {
    type Output = Deformed;
    fn sub(self, o: &Deformed) -> Deformed {
        self + &(-o)
    }
}

impl Neg for &Deformed {
    type Output = Deformed;
    fn neg(self) -> Deformed {
        Deformed { val: self.val, terms: self.terms.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Deformed {
    type Output = Deformed;
    fn mul(self, o: &Deformed) -> Deformed {
        let len = self.terms.len().min(o.terms.len());
        let terms = (0..len)
            .map(|k| (0..=k).map(|j| &self.terms[j] * &o.terms[k - j]).sum())
            .collect();
        Deformed { val: self.val + o.val, terms }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Deformed {
            type Output = Deformed;
            fn $f(self, o: Deformed) -> Deformed {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Deformed {
    type Output = Deformed;
    fn neg(self) -> Deformed {
        -&self
    }
}

/// Evaluation context: concrete `q` and the series order carried.
#[derive(Clone, Debug)]
pub struct Deformation {
    q: ExactScalar,
    order: usize,
}

impl Deformation {
    pub const DEFAULT_ORDER: usize = 8;

    pub fn new(q: ExactScalar) -> Self {
        Deformation { q, order: Self::DEFAULT_ORDER }
    }

    pub fn with_order(q: ExactScalar, order: usize) -> Self {
        Deformation { q, order: order.max(1) }
    }

    pub fn q(&self) -> &ExactScalar {
        &self.q
    }

    pub fn constant(&self, c: ExactScalar) -> Deformed {
        Deformed::constant(c, self.order)
    }

    pub fn int(&self, c: i64) -> Deformed {
        self.constant(int(c))
    }

    /// `q^e`.
    pub fn pow(&self, e: impl Into<Exponent>) -> Deformed {
        let e = e.into();
        let base = self.q.powi(e.c);
        let d = int(e.d);
        let mut terms = Vec::with_capacity(self.order);
        let mut t = base;
        for k in 0..self.order {
            terms.push(t.clone());
            t = t * &d / int(k as i64 + 1);
        }
        Deformed { val: 0, terms }
    }

    /// `1 - q^e`.
    pub fn om(&self, e: impl Into<Exponent>) -> Deformed {
        &self.int(1) - &self.pow(e)
    }
}

#[cfg(test)]
mod tests {
    use super::super::ratio;
    use super::*;

    #[test]
    fn plain_values_pass_through() {
        let d = Deformation::new(int(2));
        let v = d.pow(3) * d.om(-1);
        assert_eq!(v.limit().unwrap(), int(4));
        let w = d.pow(2).checked_div(&d.om(1)).unwrap();
        assert_eq!(w.limit().unwrap(), int(-4));
    }

    #[test]
    fn removable_ratio() {
        // (1 - q^(2 eps)) / (1 - q^eps) -> 2
        let d = Deformation::new(int(3));
        let n = Exponent::var(0);
        let v = d.om(2 * n).checked_div(&d.om(n)).unwrap();
        assert_eq!(v.limit().unwrap(), int(2));
        // (1 - q^(-eps)) / (1 - q^(3 eps)) -> -1/3
        let v = d.om(-n).checked_div(&d.om(3 * n)).unwrap();
        assert_eq!(v.limit().unwrap(), ratio(-1, 3));
    }

    #[test]
    fn poles_are_reported() {
        let d = Deformation::new(int(2));
        let n = Exponent::var(0);
        let v = d.int(1).checked_div(&d.om(n)).unwrap();
        assert!(v.limit().is_err());
        assert!(d.int(1).checked_div(&d.om(0)).is_err());
    }

    #[test]
    fn exponent_arithmetic() {
        let n = Exponent::var(5);
        let e = 2 * 3 + 1 - n - 1;
        assert_eq!(e, Exponent { c: 1, d: -1 });
    }
}
