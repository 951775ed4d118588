use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::attenuated::Index2;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_exact, int, ExactScalar};

/// Monomial orders and the two-parameter partial order on index pairs.
#[derive(Clone, Debug, PartialEq)]
pub enum OrderSpec {
    /// Total degree, then first index.
    DegLex,
    /// Total degree, then second index.
    DegLexPrime,
    /// `a <= b` iff `a1 + alpha a2 <= b1 + alpha b2` and `beta a1 + a2 <= beta b1 + b2`.
    Partial { alpha: ExactScalar, beta: ExactScalar },
}

impl OrderSpec {
    pub fn partial(alpha: ExactScalar, beta: ExactScalar) -> Result<Self> {
        let unit = |v: &ExactScalar| v >= &ExactScalar::zero() && v <= &ExactScalar::one();
        if !unit(&alpha) || !unit(&beta) {
            return Err(Error::InvalidParameter(format!(
                "alpha={} beta={} must lie in [0, 1]",
                fmt_exact(&alpha),
                fmt_exact(&beta)
            )));
        }
        if (&alpha * &beta).is_one() {
            return Err(Error::InvalidParameter("alpha * beta = 1 does not give a partial order".into()));
        }
        Ok(OrderSpec::Partial { alpha, beta })
    }

    /// A partial order meant to be used with a monomial order: `alpha < 1`
    /// with deg-lex, `beta < 1` with the primed deg-lex.
    pub fn partial_for(alpha: ExactScalar, beta: ExactScalar, base: &OrderSpec) -> Result<Self> {
        let one = ExactScalar::one();
        let ok = match base {
            OrderSpec::DegLex => alpha < one,
            OrderSpec::DegLexPrime => beta < one,
            OrderSpec::Partial { .. } => {
                return Err(Error::InvalidParameter("base order must be a monomial order".into()))
            }
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "partial order ({}, {}) is not compatible with {:?}",
                fmt_exact(&alpha),
                fmt_exact(&beta),
                base
            )));
        }
        Self::partial(alpha, beta)
    }

    /// The partial order used for the intersection numbers.
    pub fn p_partial() -> Self {
        OrderSpec::Partial { alpha: int(0), beta: int(1) }
    }

    /// The partial order used for the Krein parameters.
    pub fn q_partial() -> Self {
        OrderSpec::Partial { alpha: int(1), beta: int(0) }
    }

    pub fn is_total(&self) -> bool {
        !matches!(self, OrderSpec::Partial { .. })
    }

    pub fn compare(&self, a: Index2, b: Index2) -> Option<Ordering> {
        match self {
            OrderSpec::DegLex => Some((a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))),
            OrderSpec::DegLexPrime => Some((a.0 + a.1, a.1).cmp(&(b.0 + b.1, b.1))),
            OrderSpec::Partial { alpha, beta } => {
                if a == b {
                    return Some(Ordering::Equal);
                }
                let below = |a: Index2, b: Index2| {
                    let f = |v: Index2, w: &ExactScalar| int(v.0) + w * int(v.1);
                    let g = |v: Index2, w: &ExactScalar| w * int(v.0) + int(v.1);
                    f(a, alpha) <= f(b, alpha) && g(a, beta) <= g(b, beta)
                };
                if below(a, b) {
                    Some(Ordering::Less)
                } else if below(b, a) {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }

    /// `a` is below or equal to `b`.
    pub fn le(&self, a: Index2, b: Index2) -> bool {
        matches!(self.compare(a, b), Some(Ordering::Less | Ordering::Equal))
    }

    pub fn name(&self) -> String {
        match self {
            OrderSpec::DegLex => "deg-lex".into(),
            OrderSpec::DegLexPrime => "deg-lex-prime".into(),
            OrderSpec::Partial { alpha, beta } => format!("partial({},{})", fmt_exact(alpha), fmt_exact(beta)),
        }
    }
}

pub fn order_compare(spec: &OrderSpec, a: Index2, b: Index2) -> Option<Ordering> {
    spec.compare(a, b)
}
