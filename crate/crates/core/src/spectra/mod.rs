//! Eigenvalue and dual-eigenvalue grids, primitive idempotents and Krein parameters.

mod idempotent;
mod linalg;

use num_traits::Zero;

use crate::attenuated::{Domain, Index2, SchemeParams};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_exact, int, q_binomial, ExactScalar, QValue};
use crate::unipoly::{e_poly, k_poly, q_poly};

pub use idempotent::{brute_krein, krein_nonnegative, IdempotentReport, IdempotentSet, KreinTensor, DENSE_LIMIT};
pub use linalg::exact_rank;

/// `lambda(s) = q^{-s} - 1`.
pub fn lambda(q: &QValue, s: i64) -> ExactScalar {
    q.pow(-s) - int(1)
}

/// `Lambda(r, s) = (q^{-r} - 1)(1 - q^{r+s-n-1})`.
pub fn big_lambda(q: &QValue, n: i64, r: i64, s: i64) -> ExactScalar {
    (q.pow(-r) - int(1)) * (int(1) - q.pow(r + s - n - 1))
}

/// `theta_i = q^{-i} - 1`.
pub fn theta(q: &QValue, i: i64) -> ExactScalar {
    q.pow(-i) - int(1)
}

/// `mu(x) = q^{-x} + q^{x-N-1}`.
pub fn mu(q: &QValue, big_n: i64, x: i64) -> ExactScalar {
    q.pow(-x) + q.pow(x - big_n - 1)
}

fn check(domain: &Domain, a: Index2, b: Index2) -> Result<()> {
    domain.require(a)?;
    domain.require(b)?;
    Ok(())
}

/// `T_ij(r, s) = q^{il} K_j(m-i, l; s) E_i(n-s, m-s; r)`.
pub fn eigenvalue_t(params: &SchemeParams, i: i64, j: i64, r: i64, s: i64) -> Result<ExactScalar> {
    check(&params.domain(), (i, j), (r, s))?;
    let q = params.qvalue()?;
    let (n, l, m) = (params.n, params.l, params.m);
    if i + s > m {
        return Ok(ExactScalar::zero());
    }
    Ok(q.pow(i * l) * k_poly(j, m - i, l, &q, s) * e_poly(i, n - s, m - s, &q, r))
}

/// `U_rs(i, j) = [n m] / [n-s m-s] K_s(m-i, l; j) Q_r(n-s, m-s; i)`.
pub fn dual_u(params: &SchemeParams, r: i64, s: i64, i: i64, j: i64) -> Result<ExactScalar> {
    check(&params.domain(), (r, s), (i, j))?;
    let q = params.qvalue()?;
    let (n, l, m) = (params.n, params.l, params.m);
    let ratio = q_binomial(n, m, q.value()) / q_binomial(n - s, m - s, q.value());
    Ok(ratio * k_poly(s, m - i, l, &q, j) * q_poly(r, n - s, m - s, &q, i))
}

/// `T` and `U` over the whole domain; `D* = D`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenGrid {
    params: SchemeParams,
    q: QValue,
    domain: Domain,
    /// `t[a * k + b] = T_{D[a]}(D[b])`.
    t: Vec<ExactScalar>,
    /// `u[b * k + a] = U_{D[b]}(D[a])`.
    u: Vec<ExactScalar>,
    cardinality: ExactScalar,
}

impl EigenGrid {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        params.validate()?;
        let domain = params.domain();
        let pts = domain.points();
        let mut t = Vec::with_capacity(pts.len() * pts.len());
        let mut u = Vec::with_capacity(pts.len() * pts.len());
        for &a in pts {
            for &b in pts {
                t.push(eigenvalue_t(params, a.0, a.1, b.0, b.1)?);
                u.push(dual_u(params, a.0, a.1, b.0, b.1)?);
            }
        }
        Ok(EigenGrid {
            params: *params,
            q: params.qvalue()?,
            cardinality: params.cardinality()?,
            domain,
            t,
            u,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn q(&self) -> &QValue {
        &self.q
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn cardinality(&self) -> &ExactScalar {
        &self.cardinality
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// `T_ij(r, s)` by domain positions.
    pub fn t_at(&self, ij: usize, rs: usize) -> &ExactScalar {
        &self.t[ij * self.len() + rs]
    }

    /// `U_rs(i, j)` by domain positions.
    pub fn u_at(&self, rs: usize, ij: usize) -> &ExactScalar {
        &self.u[rs * self.len() + ij]
    }

    pub fn t(&self, ij: Index2, rs: Index2) -> Result<&ExactScalar> {
        Ok(self.t_at(self.domain.require(ij)?, self.domain.require(rs)?))
    }

    pub fn u(&self, rs: Index2, ij: Index2) -> Result<&ExactScalar> {
        Ok(self.u_at(self.domain.require(rs)?, self.domain.require(ij)?))
    }

    /// `T_ij(r, s)`, zero when `(i, j)` is outside the domain.
    pub fn t_or_zero(&self, ij: Index2, rs: usize) -> ExactScalar {
        self.domain.index_of(ij).map_or_else(ExactScalar::zero, |a| self.t_at(a, rs).clone())
    }

    /// Valencies `T_ij(0, 0)` in domain order.
    pub fn valencies(&self) -> Vec<ExactScalar> {
        (0..self.len()).map(|a| self.t_at(a, 0).clone()).collect()
    }

    /// Multiplicities `U_rs(0, 0)` in domain order.
    pub fn multiplicities(&self) -> Vec<ExactScalar> {
        (0..self.len()).map(|b| self.u_at(b, 0).clone()).collect()
    }

    /// Rows `i,j,r,s,T,U` with `T = T_ij(r,s)` and `U = U_rs(i,j)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,r,s,T,U\n");
        let pts = self.domain.points();
        for (a, &(i, j)) in pts.iter().enumerate() {
            for (b, &(r, s)) in pts.iter().enumerate() {
                out.push_str(&format!(
                    "{i},{j},{r},{s},{},{}\n",
                    fmt_exact(self.t_at(a, b)),
                    fmt_exact(self.u_at(b, a))
                ));
            }
        }
        out
    }
}

/// One Wilson-duality residual `U_rs(i,j) T_ij(0,0) - T_ij(r,s) U_rs(0,0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityResidual {
    pub ij: Index2,
    pub rs: Index2,
    pub residual: ExactScalar,
}

pub fn wilson_duality_check(grid: &EigenGrid) -> Vec<DualityResidual> {
    let pts = grid.domain().points();
    let mut out = Vec::with_capacity(pts.len() * pts.len());
    for (a, &ij) in pts.iter().enumerate() {
        for (b, &rs) in pts.iter().enumerate() {
            let residual = grid.u_at(b, a) * grid.t_at(a, 0) - grid.t_at(a, b) * grid.u_at(b, 0);
            out.push(DualityResidual { ij, rs, residual });
        }
    }
    out
}

/// Structural checks on the grid alone: unit rows, vanishing for `i + s > m`,
/// positive integer multiplicities summing to `|X|`, and `P Q = |X| I`.
pub fn check_grid(grid: &EigenGrid) -> Result<()> {
    let pts = grid.domain().points();
    let k = pts.len();
    let one = int(1);
    for b in 0..k {
        if grid.t_at(0, b) != &one || grid.u_at(0, b) != &one {
            return Err(Error::Invariant(format!("T_00 or U_00 differs from 1 at {:?}", pts[b])));
        }
    }
    for (a, &(i, _)) in pts.iter().enumerate() {
        for (b, &(_, s)) in pts.iter().enumerate() {
            if i + s > grid.params().m && !grid.t_at(a, b).is_zero() {
                return Err(Error::Invariant(format!("T{:?}({:?}) nonzero with i + s > m", pts[a], pts[b])));
            }
        }
    }
    let mut total = ExactScalar::zero();
    for (b, mult) in grid.multiplicities().into_iter().enumerate() {
        if !mult.is_integer() || mult <= ExactScalar::zero() {
            return Err(Error::Invariant(format!("multiplicity of {:?} is {}", pts[b], fmt_exact(&mult))));
        }
        total += mult;
    }
    if &total != grid.cardinality() {
        return Err(Error::Invariant(format!("multiplicities sum to {}", fmt_exact(&total))));
    }
    for a in 0..k {
        for c in 0..k {
            let s: ExactScalar = (0..k).map(|b| grid.t_at(a, b) * grid.u_at(b, c)).sum();
            let want = if a == c { grid.cardinality().clone() } else { ExactScalar::zero() };
            if s != want {
                return Err(Error::Invariant(format!("(P Q) at {:?},{:?} is {}", pts[a], pts[c], fmt_exact(&s))));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::q_pochhammer;

    fn p(q: u64, n: i64, l: i64, m: i64) -> SchemeParams {
        SchemeParams::new(q, n, l, m).unwrap()
    }

    #[test]
    fn spec_values() {
        let s = p(2, 3, 2, 2);
        assert_eq!(eigenvalue_t(&s, 1, 0, 0, 0).unwrap(), int(24));
        assert_eq!(eigenvalue_t(&s, 1, 1, 0, 0).unwrap(), int(72));
        assert_eq!(eigenvalue_t(&s, 0, 0, 1, 1).unwrap(), int(1));
        assert_eq!(dual_u(&s, 0, 0, 1, 1).unwrap(), int(1));
        assert_eq!(eigenvalue_t(&s, 2, 0, 0, 0), Err(Error::OutOfDomain(2, 0)));
    }

    #[test]
    fn multiplicity_closed_form() {
        // U_rs(0,0) = q^{ls} (q^{-l};q)_s [n s] [n-s r] (1 - q^{2r+s-n-1}) / (1 - q^{r+s-n-1})
        for s in [p(2, 3, 2, 2), p(3, 2, 1, 1), p(2, 4, 1, 2)] {
            let q = s.qvalue().unwrap();
            let qq = q.value();
            for &(r, t) in s.domain().points() {
                let want = q.pow(s.l * t)
                    * q_pochhammer(&q.pow(-s.l), qq, t).unwrap()
                    * q_binomial(s.n, t, qq)
                    * q_binomial(s.n - t, r, qq)
                    * (int(1) - q.pow(2 * r + t - s.n - 1))
                    / (int(1) - q.pow(r + t - s.n - 1));
                assert_eq!(dual_u(&s, r, t, 0, 0).unwrap(), want);
            }
        }
    }

    #[test]
    fn grids_are_consistent() {
        for s in [p(2, 3, 2, 2), p(2, 4, 2, 2), p(3, 2, 1, 1), p(2, 4, 1, 2), p(3, 3, 0, 1), p(2, 2, 3, 2)] {
            let g = EigenGrid::new(&s).unwrap();
            check_grid(&g).unwrap();
            assert!(wilson_duality_check(&g).iter().all(|r| r.residual.is_zero()), "{s}");
        }
        let g = EigenGrid::new(&p(2, 3, 2, 2)).unwrap();
        let vals: Vec<_> = g.valencies();
        assert_eq!(vals, vec![int(1), int(9), int(24), int(6), int(72)]);
        assert_eq!(g.multiplicities().iter().sum::<ExactScalar>(), int(112));
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), 26);
        assert!(csv.lines().nth(1).unwrap().starts_with("0,0,0,0,1,1"));
    }
}
