//! Recurrence and difference relations of `T_ij(r, s)`, and the bispectral
//! operator algebra built from their coefficients.

mod coeffs;
mod matrix;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::attenuated::{Index2, SchemeParams};
use crate::error::Result;
use crate::exactnum::{fmt_exact, int, ExactScalar, QValue};
use crate::spectra::{big_lambda, lambda, theta, EigenGrid};

pub use coeffs::{DifferenceCoeffs, NDeformed, RecurrenceCoeffs};
pub use matrix::RatMatrix;

const SHIFTS: [i8; 3] = [1, 0, -1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GridRelation {
    RecT1,
    RecT2,
    DiffT1,
    DiffT2,
}

impl GridRelation {
    pub fn name(self) -> &'static str {
        match self {
            GridRelation::RecT1 => "recT1",
            GridRelation::RecT2 => "recT2",
            GridRelation::DiffT1 => "diffT1",
            GridRelation::DiffT2 => "diffT2",
        }
    }
}

/// One instance of a three-term (or nine-term) relation at `T_ij(r, s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridResidual {
    pub relation: GridRelation,
    pub ij: Index2,
    pub rs: Index2,
    pub lhs: ExactScalar,
    pub rhs: ExactScalar,
    /// Shifted indices outside the domain that carry a nonzero coefficient.
    pub boundary: Vec<Index2>,
}

impl GridResidual {
    pub fn passes(&self) -> bool {
        self.lhs == self.rhs && self.boundary.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "relation": self.relation.name(),
            "ij": [self.ij.0, self.ij.1],
            "rs": [self.rs.0, self.rs.1],
            "lhs": fmt_exact(&self.lhs),
            "rhs": fmt_exact(&self.rhs),
            "boundary": self.boundary.iter().map(|p| json!([p.0, p.1])).collect::<Vec<_>>(),
            "pass": self.passes(),
        })
    }
}

/// Recurrences in the `(i, j)` index. `T` at a shifted index outside the
/// domain is read as zero; a nonzero coefficient there is reported.
pub fn verify_recurrences(grid: &EigenGrid) -> Result<Vec<GridResidual>> {
    let params = *grid.params();
    let rc = RecurrenceCoeffs::new(&params)?;
    let q = grid.q();
    let pts = grid.domain().points().to_vec();
    let mut out = Vec::with_capacity(2 * pts.len() * pts.len());
    for (a, &(i, j)) in pts.iter().enumerate() {
        for (b, &(r, s)) in pts.iter().enumerate() {
            let t = grid.t_at(a, b);
            let mut rhs = ExactScalar::zero();
            let mut boundary = Vec::new();
            for &e in &SHIFTS {
                let tgt = (i, j + e as i64);
                accumulate(grid, &mut rhs, &mut boundary, rc.b(e, i, j), tgt, b);
            }
            out.push(GridResidual { relation: GridRelation::RecT1, ij: (i, j), rs: (r, s), lhs: lambda(q, s) * t, rhs, boundary });

            let mut rhs = ExactScalar::zero();
            let mut boundary = Vec::new();
            for &e in &SHIFTS {
                for &f in &SHIFTS {
                    let tgt = (i + e as i64, j + f as i64);
                    accumulate(grid, &mut rhs, &mut boundary, rc.c(e, f, i, j), tgt, b);
                }
            }
            let lhs = q.pow(-s) * big_lambda(q, params.n, r, s) * t;
            out.push(GridResidual { relation: GridRelation::RecT2, ij: (i, j), rs: (r, s), lhs, rhs, boundary });
        }
    }
    Ok(out)
}

fn accumulate(grid: &EigenGrid, rhs: &mut ExactScalar, boundary: &mut Vec<Index2>, coeff: ExactScalar, tgt: Index2, b: usize) {
    if coeff.is_zero() {
        return;
    }
    match grid.domain().index_of(tgt) {
        Some(a) => *rhs += coeff * grid.t_at(a, b),
        None if in_quadrant(tgt) && in_box(grid.params(), tgt) => boundary.push(tgt),
        None => {}
    }
}

fn in_quadrant(p: Index2) -> bool {
    p.0 >= 0 && p.1 >= 0
}

// Indices where T is defined by the closed form although they are not in the
// domain; a coefficient there would silently drop a term.
fn in_box(params: &SchemeParams, p: Index2) -> bool {
    p.0 + p.1 <= params.m && p.0 <= params.n - params.m && p.1 <= params.l
}

/// Difference relations in the `(r, s)` variable.
pub fn verify_differences(grid: &EigenGrid) -> Result<Vec<GridResidual>> {
    let params = *grid.params();
    let dc = DifferenceCoeffs::new(&params)?;
    let q = grid.q();
    let pts = grid.domain().points().to_vec();
    let dom = grid.domain();
    let mut out = Vec::with_capacity(2 * pts.len() * pts.len());
    for (b, &(r, s)) in pts.iter().enumerate() {
        let bcoef: Vec<(Index2, ExactScalar)> =
            SHIFTS.iter().map(|&e| Ok(((r + e as i64, s), dc.big_b(e, r, s)?))).collect::<Result<_>>()?;
        let mut ccoef = Vec::with_capacity(9);
        for &e in &SHIFTS {
            for &f in &SHIFTS {
                ccoef.push(((r + e as i64, s + f as i64), dc.big_c(e, f, r, s)?));
            }
        }
        for (a, &(i, j)) in pts.iter().enumerate() {
            let t = grid.t_at(a, b);
            for (rel, coefs, lhs) in [
                (GridRelation::DiffT1, &bcoef, theta(q, i) * t),
                (GridRelation::DiffT2, &ccoef, q.pow(-i) * theta(q, j) * t),
            ] {
                let mut rhs = ExactScalar::zero();
                let mut boundary = Vec::new();
                for (tgt, c) in coefs {
                    if c.is_zero() {
                        continue;
                    }
                    match dom.index_of(*tgt) {
                        Some(bb) => rhs += c * grid.t_at(a, bb),
                        None => boundary.push(*tgt),
                    }
                }
                out.push(GridResidual { relation: rel, ij: (i, j), rs: (r, s), lhs, rhs, boundary });
            }
        }
    }
    Ok(out)
}

/// Operators on functions of the domain, in the basis of indicator vectors.
/// Column `(i, j)` of `x_raw` holds the coefficients `b^eps(i, j)` at rows `(i, j + eps)`.
#[derive(Clone, Debug)]
pub struct OperatorQuadruple {
    pub x_raw: RatMatrix,
    pub y_raw: RatMatrix,
    pub xs_raw: RatMatrix,
    pub ys_raw: RatMatrix,
    pub x: RatMatrix,
    pub y: RatMatrix,
    pub xs: RatMatrix,
    pub ys: RatMatrix,
    params: SchemeParams,
}

pub fn build_operators(params: &SchemeParams) -> Result<OperatorQuadruple> {
    params.validate()?;
    let q = params.qvalue()?;
    let rc = RecurrenceCoeffs::new(params)?;
    let dom = params.domain();
    let k = dom.len();
    let (mut xr, mut yr) = (RatMatrix::zeros(k), RatMatrix::zeros(k));
    let (mut xsd, mut ysd) = (Vec::with_capacity(k), Vec::with_capacity(k));
    for (col, &(i, j)) in dom.points().iter().enumerate() {
        for &e in &SHIFTS {
            if let Some(row) = dom.index_of((i, j + e as i64)) {
                xr.add_at(row, col, &rc.b(e, i, j));
            }
            for &f in &SHIFTS {
                if let Some(row) = dom.index_of((i + e as i64, j + f as i64)) {
                    yr.add_at(row, col, &rc.c(e, f, i, j));
                }
            }
        }
        xsd.push(q.pow(-i) * theta(&q, j));
        ysd.push(theta(&q, i));
    }
    let (xsr, ysr) = (RatMatrix::diagonal(xsd), RatMatrix::diagonal(ysd));
    let id = RatMatrix::identity(k);
    let d2 = (q.value() - int(1)).pow(2);
    let x = &id + &xr;
    let y = (&id.scale(&(int(1) + q.pow(-params.n - 1))) + &(&xr + &yr)).scale(&(q.pow(params.n + 1) / &d2));
    let ys = &id + &ysr;
    let xs = (&(&id + &ysr) + &xsr).scale(&(q.pow(params.l + 1) / &d2));
    Ok(OperatorQuadruple { x_raw: xr, y_raw: yr, xs_raw: xsr, ys_raw: ysr, x, y, xs, ys, params: *params })
}

impl OperatorQuadruple {
    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn to_json(&self) -> Value {
        json!({
            "domain": self.params.domain().points().iter().map(|p| json!([p.0, p.1])).collect::<Vec<_>>(),
            "X": self.x.to_json(),
            "Y": self.y.to_json(),
            "Xs": self.xs.to_json(),
            "Ys": self.ys.to_json(),
        })
    }
}

/// Residual of one defining relation of the algebra.
#[derive(Clone, Debug)]
pub struct AlgebraResidual {
    pub name: &'static str,
    pub residual: RatMatrix,
}

impl AlgebraResidual {
    pub fn passes(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn to_json(&self) -> Value {
        let worst = self.residual.max_entry().map(|(r, c, v)| json!({"row": r, "col": c, "value": fmt_exact(&v)}));
        json!({"relation": self.name, "pass": self.passes(), "worst": worst})
    }
}

/// The commutation and tridiagonal-type relations among `X, Y, X*, Y*`.
pub fn verify_algebra(ops: &OperatorQuadruple) -> Result<Vec<AlgebraResidual>> {
    let p = ops.params;
    let q: QValue = p.qvalue()?;
    let (n, l, m) = (p.n, p.l, p.m);
    let qq = q.value().clone();
    let one = int(1);
    let kk = &qq + &one / &qq;
    let id = RatMatrix::identity(ops.x.dim());
    let (x, y, xs, ys) = (&ops.x, &ops.y, &ops.xs, &ops.ys);
    let d2 = (&qq - &one).pow(2);
    let qm1 = q.pow(-m - 1);
    let c_l = q.pow(l + 1) + int(1);

    let tri = |a: &RatMatrix, b: &RatMatrix| (a * a).anticommutator(b) - (a * &(b * a)).scale(&kk);

    let r3 = tri(x, xs)
        - (id.scale(&(&qm1 * (&qq + &one))) - x.scale(&(&qm1 * &c_l)) - ys * x);
    let r4 = tri(xs, x)
        - (ys.scale(&(q.pow(l - m) * (&qq + &one) / &d2)) - xs.scale(&(&qm1 * &c_l)) - ys * xs);
    let two_q = int(2) / &qq + q.pow(n - m);
    let inner = &(&id.scale(&q.pow(n - m - 1)) + &x.scale(&(q.pow(m - 1) + int(2) * q.pow(n))))
        - &(x * ys).scale(&(q.pow(n - 1) * (&qq + &one)));
    let r5 = tri(y, ys)
        - (&(&inner.scale(&((&qq + &one) / &d2)) - &y.scale(&two_q)) - &(x * y).scale(&q.pow(m)));
    let r6 = tri(ys, y)
        - (&(&id.scale(&(&one + &one / &qq)) - &(x * ys).scale(&q.pow(m))) - &ys.scale(&two_q));
    Ok(vec![
        AlgebraResidual { name: "bial1_xy", residual: x.commutator(y) },
        AlgebraResidual { name: "bial1_xsys", residual: xs.commutator(ys) },
        AlgebraResidual { name: "bial2", residual: x.commutator(ys) },
        AlgebraResidual { name: "bial3", residual: r3 },
        AlgebraResidual { name: "bial4", residual: r4 },
        AlgebraResidual { name: "bial5", residual: r5 },
        AlgebraResidual { name: "bial6", residual: r6 },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64, n: i64, l: i64, m: i64) -> SchemeParams {
        SchemeParams::new(q, n, l, m).unwrap()
    }

    #[test]
    fn grid_relations_hold() {
        for s in [p(2, 3, 2, 2), p(2, 4, 2, 2), p(3, 2, 1, 1), p(2, 4, 1, 2), p(2, 5, 2, 3), p(3, 4, 3, 2)] {
            let g = EigenGrid::new(&s).unwrap();
            for r in verify_recurrences(&g).unwrap().into_iter().chain(verify_differences(&g).unwrap()) {
                assert!(r.passes(), "{s}: {}", r.to_json());
            }
        }
    }

    #[test]
    fn valency_identity_at_origin() {
        let s = p(2, 3, 2, 2);
        let rc = RecurrenceCoeffs::new(&s).unwrap();
        let g = EigenGrid::new(&s).unwrap();
        let lhs = rc.b(1, 0, 0) * g.t((0, 1), (0, 0)).unwrap() + rc.b(0, 0, 0);
        assert!(lhs.is_zero());
    }

    #[test]
    fn operators_diagonalize_on_eigenvectors() {
        // Column (r,s) of T is an eigenvector of X_raw^T with eigenvalue lambda(s).
        let s = p(2, 4, 2, 2);
        let g = EigenGrid::new(&s).unwrap();
        let ops = build_operators(&s).unwrap();
        let q = s.qvalue().unwrap();
        let k = g.len();
        for (b, &(_, ss)) in g.domain().points().iter().enumerate() {
            for a in 0..k {
                let v: ExactScalar = (0..k).map(|c| ops.x_raw.get(c, a) * g.t_at(c, b)).sum();
                assert_eq!(v, lambda(&q, ss) * g.t_at(a, b));
            }
        }
    }

    #[test]
    fn algebra_relations_hold() {
        for s in [p(2, 3, 2, 2), p(2, 4, 2, 2), p(3, 2, 1, 1), p(2, 4, 1, 2), p(3, 5, 2, 3)] {
            let ops = build_operators(&s).unwrap();
            assert!(ops.xs.is_diagonal() && ops.ys.is_diagonal());
            for r in verify_algebra(&ops).unwrap() {
                assert!(r.passes(), "{s}: {}", r.to_json());
            }
        }
    }
}
