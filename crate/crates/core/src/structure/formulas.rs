//! Closed forms for the intersection numbers `p_{10,ij}^{ab}`, `p_{01,ij}^{ab}`
//! and Krein parameters `q_{10,rs}^{ab}`, `q_{01,rs}^{ab}`.

use crate::attenuated::SchemeParams;
use crate::bispectral::{DifferenceCoeffs, RecurrenceCoeffs};
use crate::error::Result;
use crate::exactnum::{int, Deformed, ExactScalar, Exponent, QValue};

pub struct IntersectionFormulas {
    q: QValue,
    n: i64,
    l: i64,
    m: i64,
    rc: RecurrenceCoeffs,
}

impl IntersectionFormulas {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        Ok(IntersectionFormulas {
            q: params.qvalue()?,
            n: params.n,
            l: params.l,
            m: params.m,
            rc: RecurrenceCoeffs::new(params)?,
        })
    }

    fn p(&self, e: i64) -> ExactScalar {
        self.q.pow(e)
    }

    fn om(&self, e: i64) -> ExactScalar {
        int(1) - self.q.pow(e)
    }

    /// `p_{01,ij}^{i,j+eps}`.
    pub fn b_tilde(&self, eps: i8, i: i64, j: i64) -> ExactScalar {
        let (l, m) = (self.l, self.m);
        let d = self.om(1);
        match eps {
            1 => self.p(i + j) * self.om(j + 1) / d,
            -1 => (self.p(l) - self.p(j - 1)) * (self.p(i + j - 1) - self.p(m)) / d,
            _ => {
                ((self.p(l) - int(1)) * self.om(m)
                    - self.p(i + j - 1) * self.om(j)
                    - (self.p(l) - self.p(j)) * (self.p(i + j) - self.p(m)))
                    / d
            }
        }
    }

    /// `p_{10,ij}^{i+eps,j+eps'}`.
    pub fn c_tilde(&self, eps: i8, epsp: i8, i: i64, j: i64) -> ExactScalar {
        let (n, l, m) = (self.n, self.l, self.m);
        let d = self.om(1).pow(2);
        let v = match (eps, epsp) {
            (1, 0) => self.p(j) * self.om(i + 1).pow(2),
            (1, -1) => (self.p(l) - self.p(j - 1)) * self.om(i + 1).pow(2),
            (0, 1) => self.p(i + j + 1) * self.om(i) * self.om(j + 1),
            (0, 0) => {
                self.p(l + 1)
                    * self.om(i)
                    * (self.om(n - m) + self.p(i) - self.p(m) - self.om(i) / self.p(1) - self.p(m) * self.rc.b(0, i, j))
            }
            (0, -1) => (self.p(l) - self.p(j - 1)) * self.om(i) * (self.p(i + j) - self.p(m + 1)),
            (-1, 1) => self.p(l + i) * self.om(j + 1) * (self.p(i - 1) - self.p(n - m)),
            (-1, 0) => self.p(l) * (self.p(i + j) - self.p(m + 1)) * (self.p(i - 1) - self.p(n - m)),
            _ => return int(0),
        };
        v / d
    }
}

pub struct KreinFormulas {
    dc: DifferenceCoeffs,
}

impl KreinFormulas {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        Ok(KreinFormulas { dc: DifferenceCoeffs::new(params)? })
    }

    /// `q_{10,rs}^{r+eps,s}`.
    pub fn big_b_tilde(&self, eps: i8, r: i64, s: i64) -> Result<ExactScalar> {
        let c = self.dc.context();
        let (n, m) = (c.n, c.m);
        let e = Exponent::from;
        let v: Deformed = match eps {
            1 => (c.pow(e(r + s))
                * c.om(-n)
                * c.om(1 - n)
                * c.om(e(r + 1))
                * c.om(r + m - n)
                * c.om(e(r + s - m)))
            .checked_div(&(c.om(e(1)) * c.om(e(-m)) * c.om(m - n) * c.om(2 * r + s - n) * c.om(2 * r + s + 1 - n)))?,
            -1 => (c.pow(e(1))
                * c.om(n - 1)
                * c.om(-n)
                * c.om(r + m - 1 - n)
                * c.om(e(r + s - m - 1))
                * c.om(r + s - 2 - n))
            .checked_div(
                &(c.om(e(1)) * c.om(e(-m)) * c.om(m - n) * c.om(2 * r + s - 2 - n) * c.om(2 * r + s - 3 - n)),
            )?,
            _ => {
                let head = (c.pow(e(1)) * c.om(n - 1)).checked_div(&c.om(e(1)))?;
                let scale = (c.pow(e(1)) * c.om(n - 1) * c.om(-n))
                    .checked_div(&(c.om(e(1)) * c.om(e(-m)) * c.om(m - n)))?;
                head + scale * self.dc.big_b_series(0, r, s)?
            }
        };
        v.limit()
    }

    /// `q_{01,rs}^{r+eps,s+eps'}`.
    pub fn big_c_tilde(&self, eps: i8, epsp: i8, r: i64, s: i64) -> Result<ExactScalar> {
        let c = self.dc.context();
        let (n, l, m) = (c.n, c.l, c.m);
        let e = Exponent::from;
        let base = c.om(e(1)) * c.om(e(-m));
        let v: Deformed = match (eps, epsp) {
            (1, 0) => (-(c.pow(e(r + s))
                * c.om(-n)
                * c.om(e(s))
                * c.om(e(r + 1))
                * c.om(r + m - n)
                * c.om(e(r + s - m))))
            .checked_div(&(base * c.om(2 * r + s - n) * c.om(2 * r + s + 1 - n)))?,
            (-1, 0) => (-(c.om(n) * c.om(e(s)) * c.om(r + s - 2 - n) * c.om(e(r + s - m - 1)) * c.om(r + m - 1 - n)))
                .checked_div(&(base * c.om(2 * r + s - 2 - n) * c.om(2 * r + s - 3 - n)))?,
            (0, 0) => {
                let f = (c.om(n) * c.om(e(s))).checked_div(&(c.om(e(1)) * c.om(e(m))))?;
                let inner = c.pow(e(l)) + c.pow(e(m)) - c.pow(e(s)) - c.pow(e(s - 1)) - c.int(1)
                    + c.pow(e(m)) * self.dc.big_b_series(0, r, s)?;
                f * inner
            }
            (-1, 1) => (-(c.pow(e(s - m)) * c.om(n) * c.om(e(s + 1)) * c.om(r + m - 1 - n)))
                .checked_div(&(base * c.om(2 * r + s - 2 - n)))?,
            (0, 1) => (c.pow(e(r + s)) * c.om(-n) * c.om(e(s + 1)) * c.om(e(r + s - m)))
                .checked_div(&(base * c.om(2 * r + s - n)))?,
            (1, -1) => (-(c.pow(e(s - m - 1))
                * (c.pow(e(l)) - c.pow(e(s - 1)))
                * c.om(r + m - n)
                * c.om(n)
                * c.om(e(r + 1))))
            .checked_div(&(base * c.om(2 * r + s - n)))?,
            (0, -1) => ((c.pow(e(l)) - c.pow(e(s - 1))) * c.om(n) * c.om(e(r + s - m - 1)) * c.om(r + s - 2 - n))
                .checked_div(&(base * c.om(2 * r + s - 2 - n)))?,
            _ => return Ok(int(0)),
        };
        v.limit()
    }
}
