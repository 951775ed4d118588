//! The univariate families `K_k`, `E_k`, `Q_k` and their relations.
//!
//! Exact evaluators take a [`QValue`] and apply the vanishing convention
//! outside the degree range. The `*_generic` variants take `q` and `q^l` in
//! any [`Field`] and are used by the high-precision limit code, where `l` is
//! not an integer.

mod relations;

use num_traits::Zero;

use crate::error::Result;
use crate::exactnum::{basic_hypergeometric, phi_3_2, q_binomial, q_pochhammer, ExactScalar, Field, QValue};

pub use relations::{verify_e_relations, verify_k_relations, RelationId, RelationResidual};

/// Parameters of one univariate family: `N`, and `l` (for K) or `m` (for E, Q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: i64,
    pub second: i64,
    pub q: QValue,
}

impl FamilyParams {
    pub fn new(n: i64, second: i64, q: QValue) -> Self {
        FamilyParams { n, second, q }
    }

    pub fn k(&self, k: i64, x: i64) -> ExactScalar {
        k_poly(k, self.n, self.second, &self.q, x)
    }

    pub fn e(&self, k: i64, x: i64) -> ExactScalar {
        e_poly(k, self.n, self.second, &self.q, x)
    }

    pub fn qh(&self, k: i64, x: i64) -> ExactScalar {
        q_poly(k, self.n, self.second, &self.q, x)
    }
}

fn expect_terminating(r: Result<ExactScalar>) -> ExactScalar {
    // the parameters below always terminate with nonzero denominators in range
    r.expect("in-range family parameters give a regular terminating series")
}

/// `K_k(N, l; q; x)`; zero unless `0 <= k <= min(N, l)`.
pub fn k_poly(k: i64, n: i64, l: i64, q: &QValue, x: i64) -> ExactScalar {
    if k < 0 || k > n.min(l) || x < 0 {
        return ExactScalar::zero();
    }
    let qq = q.value();
    let pre = q_pochhammer(&q.pow(-l), qq, k).unwrap() * q_binomial(n, k, qq) * q.pow(l * k);
    let series = phi_3_2(&q.pow(-k), &ExactScalar::zero(), &q.pow(-x), &q.pow(-l), &q.pow(-n), qq, qq);
    pre * expect_terminating(series)
}

/// `E_k(N, m; q; x)`; zero unless `0 <= k <= min(N - m, m)`.
pub fn e_poly(k: i64, n: i64, m: i64, q: &QValue, x: i64) -> ExactScalar {
    if k < 0 || k > (n - m).min(m) || x < 0 {
        return ExactScalar::zero();
    }
    let qq = q.value();
    let pre = q.pow(k * k) * q_binomial(m, k, qq) * q_binomial(n - m, k, qq);
    let series = phi_3_2(&q.pow(-k), &q.pow(x - n - 1), &q.pow(-x), &q.pow(-m), &q.pow(m - n), qq, qq);
    pre * expect_terminating(series)
}

/// `Q_k(N, m; q; x)`; zero unless `0 <= k <= min(N - m, m)`.
pub fn q_poly(k: i64, n: i64, m: i64, q: &QValue, x: i64) -> ExactScalar {
    if k < 0 || k > (n - m).min(m) || x < 0 {
        return ExactScalar::zero();
    }
    let qq = q.value();
    let pre = q_binomial(n, k, qq) - q_binomial(n, k - 1, qq);
    let series = phi_3_2(&q.pow(-x), &q.pow(k - n - 1), &q.pow(-k), &q.pow(-m), &q.pow(m - n), qq, qq);
    pre * expect_terminating(series)
}

/// `K_k(N, l; q; x)` with `q^l` supplied directly; only `0 <= k <= N` is checked.
pub fn k_generic<F: Field>(k: i64, n: i64, ql: &F, q: &F, x: i64) -> Result<F> {
    if k < 0 || k > n || x < 0 {
        return Ok(F::zero());
    }
    let inv_ql = F::one() / ql.clone();
    let pre = q_pochhammer(&inv_ql, q, k)? * q_binomial(n, k, q) * ql.powi(k);
    let upper = [q.powi(-k), F::zero(), q.powi(-x)];
    let lower = [inv_ql, q.powi(-n)];
    let s = basic_hypergeometric(&upper, &lower, q, q, k.min(x) as usize)?;
    Ok(pre * s)
}

pub fn e_generic<F: Field>(k: i64, n: i64, m: i64, q: &F, x: i64) -> Result<F> {
    if k < 0 || k > (n - m).min(m) || x < 0 {
        return Ok(F::zero());
    }
    let pre = q.powi(k * k) * q_binomial(m, k, q) * q_binomial(n - m, k, q);
    let upper = [q.powi(-k), q.powi(x - n - 1), q.powi(-x)];
    let lower = [q.powi(-m), q.powi(m - n)];
    let s = basic_hypergeometric(&upper, &lower, q, q, k.min(x) as usize)?;
    Ok(pre * s)
}

pub fn q_generic<F: Field>(k: i64, n: i64, m: i64, q: &F, x: i64) -> Result<F> {
    if k < 0 || k > (n - m).min(m) || x < 0 {
        return Ok(F::zero());
    }
    let pre = q_binomial(n, k, q) - q_binomial(n, k - 1, q);
    let upper = [q.powi(-x), q.powi(k - n - 1), q.powi(-k)];
    let lower = [q.powi(-m), q.powi(m - n)];
    let s = basic_hypergeometric(&upper, &lower, q, q, k.min(x) as usize)?;
    Ok(pre * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ratio};

    fn q(n: u64) -> QValue {
        QValue::from_order(n).unwrap()
    }

    // K, E, Q straight from the series definition, with no shared helpers
    fn qp(a: &ExactScalar, q: &ExactScalar, n: i64) -> ExactScalar {
        (0..n).fold(int(1), |acc, k| acc * (int(1) - a * q.powi(k)))
    }

    fn qb(n: i64, k: i64, q: &ExactScalar) -> ExactScalar {
        if k < 0 || k > n {
            return int(0);
        }
        qp(q, q, n) / (qp(q, q, k) * qp(q, q, n - k))
    }

    fn series(a: [ExactScalar; 3], b: [ExactScalar; 2], q: &ExactScalar, last: i64) -> ExactScalar {
        (0..=last)
            .map(|t| {
                let num: ExactScalar = a.iter().map(|x| qp(x, q, t)).product();
                let den: ExactScalar = b.iter().map(|x| qp(x, q, t)).product();
                num / den * q.powi(t) / qp(q, q, t)
            })
            .sum()
    }

    fn k_oracle(k: i64, n: i64, l: i64, q: &ExactScalar, x: i64) -> ExactScalar {
        if k < 0 || k > n.min(l) {
            return int(0);
        }
        let pre = qp(&q.powi(-l), q, k) * qb(n, k, q) * q.powi(l * k);
        pre * series([q.powi(-k), int(0), q.powi(-x)], [q.powi(-l), q.powi(-n)], q, k.min(x))
    }

    #[test]
    fn spec_values() {
        let q2 = q(2);
        assert_eq!(k_poly(0, 3, 2, &q2, 2), int(1));
        assert_eq!(k_poly(1, 1, 2, &q2, 0), int(3));
        assert_eq!(k_poly(3, 2, 2, &q2, 0), int(0));
        assert_eq!(e_poly(0, 3, 2, &q2, 1), int(1));
        assert_eq!(e_poly(1, 3, 2, &q2, 0), int(6));
        assert_eq!(e_poly(2, 3, 2, &q2, 0), int(0));
        assert_eq!(q_poly(0, 3, 2, &q2, 0), int(1));
        assert_eq!(q_poly(1, 3, 2, &q2, 0), int(6));
        assert_eq!(q_poly(-1, 3, 2, &q2, 0), int(0));
    }

    #[test]
    fn k_matches_oracle() {
        for qn in [2u64, 3] {
            let qv = q(qn);
            let qq = int(qn as i64);
            for n in 0..=4 {
                for l in 0..=4 {
                    for k in -1..=5 {
                        for x in 0..=4 {
                            assert_eq!(k_poly(k, n, l, &qv, x), k_oracle(k, n, l, &qq, x));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_margin() {
        let qv = q(3);
        for n in 0..=5 {
            for second in 0..=n {
                for x in 0..=3 {
                    for d in 1..=2 {
                        assert!(k_poly(n.min(second) + d, n, second, &qv, x).is_zero());
                        assert!(k_poly(-d, n, second, &qv, x).is_zero());
                        let top = (n - second).min(second);
                        assert!(e_poly(top + d, n, second, &qv, x).is_zero());
                        assert!(q_poly(top + d, n, second, &qv, x).is_zero());
                        assert!(e_poly(-d, n, second, &qv, x).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn dual_hahn_duality() {
        // E_k(x) / prefactor = Q_x(k) / prefactor, both being R_k(mu(x))
        for qn in [2u64, 3] {
            let qv = q(qn);
            let qq = qv.value().clone();
            for n in 0..=5 {
                for m in 0..=n {
                    let top = (n - m).min(m);
                    for k in 0..=top {
                        for x in 0..=top {
                            let pe = qq.powi(k * k) * qb(m, k, &qq) * qb(n - m, k, &qq);
                            let pq = qb(n, x, &qq) - qb(n, x - 1, &qq);
                            assert_eq!(e_poly(k, n, m, &qv, x) / pe, q_poly(x, n, m, &qv, k) / pq);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generic_agrees_with_exact() {
        let qv = q(2);
        let qq = qv.value().clone();
        for n in 0..=4 {
            for l in 0..=3 {
                let ql = qv.pow(l);
                for k in 0..=n.min(l) {
                    for x in 0..=4 {
                        assert_eq!(k_generic(k, n, &ql, &qq, x).unwrap(), k_poly(k, n, l, &qv, x));
                    }
                }
            }
            for m in 0..=n {
                for k in 0..=3 {
                    for x in 0..=3 {
                        assert_eq!(e_generic(k, n, m, &qq, x).unwrap(), e_poly(k, n, m, &qv, x));
                        assert_eq!(q_generic(k, n, m, &qq, x).unwrap(), q_poly(k, n, m, &qv, x));
                    }
                }
            }
        }
        let half = ratio(1, 2);
        assert!(k_generic(1, 2, &half, &int(3), 1).is_ok());
    }
}
