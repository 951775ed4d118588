//! Coefficients of the recurrence and difference relations of `T_ij(r, s)`.

use num_traits::Zero;

use crate::attenuated::SchemeParams;
use crate::error::Result;
use crate::exactnum::{int, Deformation, Deformed, ExactScalar, Exponent, QValue};

/// Recurrence coefficients `b^eps(i, j)` and `c^{eps eps'}(i, j)`.
#[derive(Clone, Debug)]
pub struct RecurrenceCoeffs {
    q: QValue,
    n: i64,
    l: i64,
    m: i64,
}

impl RecurrenceCoeffs {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        Ok(RecurrenceCoeffs { q: params.qvalue()?, n: params.n, l: params.l, m: params.m })
    }

    fn p(&self, e: i64) -> ExactScalar {
        self.q.pow(e)
    }

    fn om(&self, e: i64) -> ExactScalar {
        int(1) - self.q.pow(e)
    }

    pub fn b(&self, eps: i8, i: i64, j: i64) -> ExactScalar {
        let (l, m) = (self.l, self.m);
        let bp = |i: i64, j: i64| self.p(i + j - l - m) * (self.p(j + 1) - int(1));
        let bm = |i: i64, j: i64| (self.p(j - l - 1) - int(1)) * (self.p(i + j - m - 1) - int(1));
        match eps {
            1 => bp(i, j),
            -1 => bm(i, j),
            _ => -bp(i, j - 1) - bm(i, j + 1),
        }
    }

    pub fn c(&self, eps: i8, epsp: i8, i: i64, j: i64) -> ExactScalar {
        let (n, l, m) = (self.n, self.l, self.m);
        match (eps, epsp) {
            (1, 0) => self.p(j - l - n - 1) * self.om(i + 1).pow(2),
            (1, -1) => self.p(-n - 1) * self.om(i + 1).pow(2) * self.om(j - l - 1),
            (0, 1) => self.p(i + j - l - m) * (self.p(i - n + m) - int(1)) * (self.p(j + 1) - int(1)),
            (0, 0) => {
                -self.om(i - n + m) * self.om(i - m) - self.p(-n - 1) * self.om(i).pow(2)
                    - self.om(i - n + m) * self.b(0, i, j)
            }
            (0, -1) => -self.om(i - n + m) * self.om(j - l - 1) * self.om(i + j - m - 1),
            (-1, 1) => self.p(i - m - 1) * self.om(i - 1 - n + m) * (self.p(j + 1) - int(1)),
            (-1, 0) => self.om(i - 1 - n + m) * self.om(j - m + i - 1),
            _ => ExactScalar::zero(),
        }
    }
}

/// Arithmetic in `q` with `n` replaced by `n + eps`, for ratios that are
/// `0/0` on the edge of the domain.
#[derive(Clone, Debug)]
pub struct NDeformed {
    d: Deformation,
    pub n: Exponent,
    pub l: i64,
    pub m: i64,
}

impl NDeformed {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        let q = params.qvalue()?;
        Ok(NDeformed { d: Deformation::new(q.value().clone()), n: Exponent::var(params.n), l: params.l, m: params.m })
    }

    pub fn pow(&self, e: impl Into<Exponent>) -> Deformed {
        self.d.pow(e)
    }

    /// `1 - q^e`.
    pub fn om(&self, e: impl Into<Exponent>) -> Deformed {
        self.d.om(e)
    }

    pub fn int(&self, c: i64) -> Deformed {
        self.d.int(c)
    }

    pub fn constant(&self, c: ExactScalar) -> Deformed {
        self.d.constant(c)
    }
}

/// Difference coefficients `B^eps(r, s)` and `C^{eps eps'}(r, s)`.
#[derive(Clone, Debug)]
pub struct DifferenceCoeffs {
    ctx: NDeformed,
}

impl DifferenceCoeffs {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        Ok(DifferenceCoeffs { ctx: NDeformed::new(params)? })
    }

    pub fn context(&self) -> &NDeformed {
        &self.ctx
    }

    /// `B^eps(r, s)` before taking the limit.
    pub fn big_b_series(&self, eps: i8, r: i64, s: i64) -> Result<Deformed> {
        let c = &self.ctx;
        let (n, m) = (c.n, c.m);
        let e = Exponent::from;
        let plus = || {
            (c.om(r + m - n) * c.om(e(r + s - m)) * c.om(r + s - n - 1))
                .checked_div(&(c.om(2 * r + s - n - 1) * c.om(2 * r + s - n)))
        };
        let minus = || {
            (-(c.pow(r + s - n - 1) * c.om(e(r)) * c.om(e(r + s - m - 1)) * c.om(r + m - n - 1)))
                .checked_div(&(c.om(2 * r + s - n - 2) * c.om(2 * r + s - n - 1)))
        };
        match eps {
            1 => plus(),
            -1 => minus(),
            _ => Ok(-plus()? - minus()?),
        }
    }

    pub fn big_b(&self, eps: i8, r: i64, s: i64) -> Result<ExactScalar> {
        self.big_b_series(eps, r, s)?.limit()
    }

    pub fn big_c(&self, eps: i8, epsp: i8, r: i64, s: i64) -> Result<ExactScalar> {
        let c = &self.ctx;
        let (n, l, m) = (c.n, c.l, c.m);
        let e = Exponent::from;
        let f = c.om(e(s - l));
        let v = match (eps, epsp) {
            (1, 0) => -(&f * &self.big_b_series(1, r, s)?),
            (-1, 0) => -(&f * &self.big_b_series(-1, r, s)?),
            (0, 0) => {
                -(&f * &self.big_b_series(0, r, s)?) - &f * &c.om(e(s - m))
                    + c.pow(e(s - l - m - 1)) * c.om(e(s))
            }
            (-1, 1) => (-(c.pow(e(s - m)) * f * c.om(e(r)) * c.om(r + m - n - 1)))
                .checked_div(&c.om(2 * r + s - n - 1))?,
            (0, 1) => (f * c.om(r + s - n - 1) * c.om(e(r + s - m))).checked_div(&c.om(2 * r + s - n - 1))?,
            (1, -1) => (-(c.pow(e(s - l - m - 1)) * c.om(e(s)) * c.om(r + m - n)))
                .checked_div(&c.om(2 * r + s - n - 1))?,
            (0, -1) => (-(c.pow(r + s - l - n - 1) * c.om(e(s)) * c.om(e(r + s - m - 1))))
                .checked_div(&c.om(2 * r + s - n - 1))?,
            _ => c.int(0),
        };
        v.limit()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definitional_identities() {
        let p = SchemeParams::new(2, 3, 2, 2).unwrap();
        let rc = RecurrenceCoeffs::new(&p).unwrap();
        let dc = DifferenceCoeffs::new(&p).unwrap();
        for &(i, j) in p.domain().points() {
            assert_eq!(rc.b(0, i, j), -rc.b(1, i, j - 1) - rc.b(-1, i, j + 1));
            assert!(rc.c(1, 1, i, j).is_zero() && rc.c(-1, -1, i, j).is_zero());
            let b: ExactScalar = [1, 0, -1].iter().map(|&e| dc.big_b(e, i, j).unwrap()).sum();
            assert!(b.is_zero());
            assert!(dc.big_c(1, 1, i, j).unwrap().is_zero());
        }
    }
}
