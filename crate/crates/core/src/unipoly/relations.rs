//! Recurrence, difference and contiguity relations of `K_j` and `E_i`.
//!
//! Both sides are evaluated independently. Coefficients that read `0/0` at
//! an edge of the index range are taken as the limit `N -> N + eps`.

use num_traits::Zero;
use serde::Serialize;

use super::{e_poly, k_poly};
use crate::error::Result;
use crate::exactnum::{fmt_exact, Deformation, Deformed, ExactScalar, Exponent, QValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RelationId {
    CrecK,
    DiffK,
    RecE,
    CdiffE,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationResidual {
    pub relation: RelationId,
    pub eps: i8,
    /// `(degree, variable)`.
    pub point: (i64, i64),
    pub lhs: ExactScalar,
    pub rhs: ExactScalar,
    /// A nonzero coefficient multiplied a point where the family is undefined.
    pub boundary_violation: bool,
}

impl RelationResidual {
    pub fn residual(&self) -> ExactScalar {
        &self.lhs - &self.rhs
    }

    pub fn passes(&self) -> bool {
        self.lhs == self.rhs && !self.boundary_violation
    }

    pub fn describe(&self) -> String {
        format!(
            "{:?}(eps={}) at {:?}: lhs={} rhs={}",
            self.relation,
            self.eps,
            self.point,
            fmt_exact(&self.lhs),
            fmt_exact(&self.rhs)
        )
    }
}

fn qp(q: &QValue, e: i64) -> ExactScalar {
    q.pow(e)
}

fn one() -> ExactScalar {
    crate::exactnum::int(1)
}

/// Coefficients `a_j^{eps,eps'}` of the contiguity recurrence for `K_j`.
fn a_coeff(q: &QValue, n: i64, l: i64, eps: i8, epsp: i8, j: i64) -> ExactScalar {
    let a0p = |j: i64| (qp(q, j + 1) - one()) * qp(q, j - n - l);
    let a0m = |j: i64| (one() - qp(q, j - n - 1)) * (one() - qp(q, j - l - 1));
    match (eps, epsp) {
        (1, 1) => (qp(q, j + 1) - one()) * qp(q, -n),
        (1, 0) => qp(q, 1) - qp(q, j - n),
        (1, -1) => ExactScalar::zero(),
        (0, 1) => a0p(j),
        (0, -1) => a0m(j),
        (0, 0) => -a0p(j - 1) - a0m(j + 1),
        (-1, 1) => ExactScalar::zero(),
        (-1, -1) => qp(q, l) - qp(q, j - 1),
        (-1, 0) => qp(q, j),
        _ => unreachable!(),
    }
}

fn lambda_eps(q: &QValue, n: i64, l: i64, eps: i8, s: i64) -> ExactScalar {
    match eps {
        1 => (qp(q, -s) - qp(q, -n - 1)) * qp(q, l + 1),
        0 => qp(q, -s) - one(),
        _ => one(),
    }
}

/// All residuals of the contiguity recurrence and the difference equation for `K_j(N, l)`.
pub fn verify_k_relations(n: i64, l: i64, q: &QValue) -> Vec<RelationResidual> {
    let mut out = Vec::new();
    for eps in [0i8, 1, -1] {
        let ne = n + eps as i64;
        let s_top = n.min(ne).min(l);
        for j in 0..=n.min(l) {
            for s in 0..=s_top {
                let lhs = lambda_eps(q, n, l, eps, s) * k_poly(j, n, l, q, s);
                let rhs = [1i8, 0, -1]
                    .iter()
                    .map(|&e2| a_coeff(q, n, l, eps, e2, j) * k_poly(j + e2 as i64, ne, l, q, s))
                    .sum();
                out.push(RelationResidual {
                    relation: RelationId::CrecK,
                    eps,
                    point: (j, s),
                    lhs,
                    rhs,
                    boundary_violation: false,
                });
            }
        }
    }
    let top = n.min(l);
    for j in 0..=top {
        for s in 0..=top {
            let bp = (one() - qp(q, s - n)) * (one() - qp(q, s - l));
            let bm = -qp(q, s - l - n - 1) * (one() - qp(q, s));
            let b0 = -&bp - &bm;
            let lhs = (qp(q, -j) - one()) * k_poly(j, n, l, q, s);
            let mut boundary_violation = false;
            let mut rhs = &b0 * k_poly(j, n, l, q, s) + &bp * k_poly(j, n, l, q, s + 1);
            if s > 0 {
                rhs += &bm * k_poly(j, n, l, q, s - 1);
            } else if !bm.is_zero() {
                boundary_violation = true;
            }
            out.push(RelationResidual {
                relation: RelationId::DiffK,
                eps: 0,
                point: (j, s),
                lhs,
                rhs,
                boundary_violation,
            });
        }
    }
    out
}

/// Coefficients `B^{eps,eps'}(r)` of the contiguity difference equations for `E_i`.
fn big_b(d: &Deformation, n: i64, m: i64, eps: i8, epsp: i8, r: i64) -> Result<ExactScalar> {
    let nn = Exponent::var(n);
    let om = |e: Exponent| d.om(e);
    let p = |e: Exponent| d.pow(e);
    let e = |c: i64| Exponent::from(c);
    let v: Deformed = match (eps, epsp) {
        (1, 1) => om(r + m - nn).checked_div(&om(2 * r - nn - 1))?,
        (1, -1) | (-1, 1) => d.int(0),
        (1, 0) => (-(p(2 * r - nn - 1) * om(e(m + 1 - r)))).checked_div(&om(2 * r - nn - 1))?,
        (0, 1) => (om(r - nn + m) * om(r - nn - 1) * om(e(r - m)))
            .checked_div(&(om(2 * r - nn - 1) * om(2 * r - nn)))?,
        (0, -1) => (-(p(r - nn - 1) * om(e(r)) * om(e(r - m - 1)) * om(r - nn + m - 1)))
            .checked_div(&(om(2 * r - nn - 1) * om(2 * r - nn - 2)))?,
        (0, 0) => {
            let bp = (om(r - nn + m) * om(r - nn - 1) * om(e(r - m)))
                .checked_div(&(om(2 * r - nn - 1) * om(2 * r - nn)))?;
            let bm = (-(p(r - nn - 1) * om(e(r)) * om(e(r - m - 1)) * om(r - nn + m - 1)))
                .checked_div(&(om(2 * r - nn - 1) * om(2 * r - nn - 2)))?;
            -bp - bm
        }
        (-1, -1) => (-(om(r - nn + m - 1) * om(e(r)))).checked_div(&om(2 * r - nn - 1))?,
        (-1, 0) => (om(r - nn - 1) * (p(e(m)) - p(e(r)))).checked_div(&om(2 * r - nn - 1))?,
        _ => unreachable!(),
    };
    v.limit()
}

/// All residuals of the recurrence and contiguity difference equations for `E_i(N, m)`.
pub fn verify_e_relations(n: i64, m: i64, q: &QValue) -> Result<Vec<RelationResidual>> {
    let mut out = Vec::new();
    let top = (n - m).min(m);
    let ap = |i: i64| (one() - qp(q, i + 1)).pow(2) * qp(q, -n - 1);
    let am = |i: i64| (one() - qp(q, i - 1 - n + m)) * (one() - qp(q, i - m - 1));
    for i in 0..=top {
        for r in 0..=top {
            let big_lambda = (qp(q, -r) - one()) * (one() - qp(q, r - n - 1));
            let lhs = big_lambda * e_poly(i, n, m, q, r);
            let a0 = -ap(i - 1) - am(i + 1);
            let rhs = ap(i) * e_poly(i + 1, n, m, q, r)
                + a0 * e_poly(i, n, m, q, r)
                + am(i) * e_poly(i - 1, n, m, q, r);
            out.push(RelationResidual {
                relation: RelationId::RecE,
                eps: 0,
                point: (i, r),
                lhs,
                rhs,
                boundary_violation: false,
            });
        }
    }
    let d = Deformation::new(q.value().clone());
    for eps in [0i8, 1, -1] {
        let (ne, me) = (n + eps as i64, m + eps as i64);
        for i in 0..=top {
            for r in 0..=top {
                let theta = match eps {
                    1 => one(),
                    0 => qp(q, -i) - one(),
                    _ => qp(q, m - i) - one(),
                };
                let lhs = theta * e_poly(i, n, m, q, r);
                let mut rhs = ExactScalar::zero();
                let mut boundary_violation = false;
                for epsp in [1i8, 0, -1] {
                    let c = big_b(&d, n, m, eps, epsp, r)?;
                    let x = r + epsp as i64;
                    if x < 0 || ne < 0 || me < 0 {
                        boundary_violation |= !c.is_zero();
                        continue;
                    }
                    rhs += c * e_poly(i, ne, me, q, x);
                }
                out.push(RelationResidual {
                    relation: RelationId::CdiffE,
                    eps,
                    point: (i, r),
                    lhs,
                    rhs,
                    boundary_violation,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64) -> QValue {
        QValue::from_order(n).unwrap()
    }

    #[test]
    fn diff_k_at_2_2() {
        let res = verify_k_relations(2, 2, &q(2));
        let diff: Vec<_> = res.iter().filter(|r| r.relation == RelationId::DiffK).collect();
        assert_eq!(diff.len(), 9);
        assert!(diff.iter().all(|r| r.passes()));
        let p = res
            .iter()
            .find(|r| r.relation == RelationId::CrecK && r.eps == 1 && r.point == (1, 1))
            .unwrap();
        assert!(p.passes(), "{}", p.describe());
    }

    #[test]
    fn rec_e_at_4_2() {
        let res = verify_e_relations(4, 2, &q(2)).unwrap();
        assert!(res.iter().filter(|r| r.relation == RelationId::RecE).all(|r| r.passes()));
        let p = res
            .iter()
            .find(|r| r.relation == RelationId::CdiffE && r.eps == 1 && r.point == (0, 0))
            .unwrap();
        assert!(p.passes());
    }

    #[test]
    fn full_sweep_small() {
        for qn in [2u64, 3] {
            let qv = q(qn);
            for n in 0..=5 {
                for s in 0..=5 {
                    for r in verify_k_relations(n, s, &qv) {
                        assert!(r.passes(), "N={n} l={s} q={qn}: {}", r.describe());
                    }
                    if s <= n {
                        for r in verify_e_relations(n, s, &qv).unwrap() {
                            assert!(r.passes(), "N={n} m={s} q={qn}: {}", r.describe());
                        }
                    }
                }
            }
        }
    }
}
