//! Primitive idempotents `E_rs = |X|^{-1} sum_ij U_rs(i,j) A_ij`.
//!
//! Every matrix in the Bose-Mesner algebra is stored by its coefficients in
//! the `A` basis. Because the `A_ij` have disjoint supports, a product is
//! expanded exactly with the counted intersection numbers. For small schemes
//! the same identities are also checked on dense integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::linalg::{exact_rank, matmul};
use super::EigenGrid;
use crate::attenuated::{BruteTensor, Index2, SchemeInstance};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_exact, int, ExactScalar};

/// Largest `|X|` for which dense matrices are materialized.
pub const DENSE_LIMIT: usize = 150;

#[derive(Clone, Debug, PartialEq)]
pub struct IdempotentSet {
    classes: Vec<Index2>,
    card: usize,
    /// `coeffs[rs][c]`: entry of `E_rs` on any pair in class `c`.
    coeffs: Vec<Vec<ExactScalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub algebra_checks: usize,
    pub dense: bool,
    /// Exact ranks of `E_rs` in domain order, when dense.
    pub ranks: Option<Vec<usize>>,
}

fn unit(k: usize, c: usize) -> Vec<ExactScalar> {
    (0..k).map(|d| if d == c { int(1) } else { int(0) }).collect()
}

fn fail(what: String) -> Error {
    Error::Invariant(what)
}

/// Product in the `A` basis: `(sum u_c A_c)(sum v_d A_d) = sum_e (sum u_c v_d p_cd^e) A_e`.
pub(crate) fn bm_mul(p: &BruteTensor, u: &[ExactScalar], v: &[ExactScalar]) -> Vec<ExactScalar> {
    let k = u.len();
    let mut out = vec![ExactScalar::zero(); k];
    for c in 0..k {
        if u[c].is_zero() {
            continue;
        }
        for d in 0..k {
            if v[d].is_zero() {
                continue;
            }
            let f = &u[c] * &v[d];
            for (e, o) in out.iter_mut().enumerate() {
                let pv = p.by_index(c, d, e);
                if pv != 0 {
                    *o += &f * int(pv as i64);
                }
            }
        }
    }
    out
}

impl IdempotentSet {
    pub fn new(inst: &SchemeInstance, grid: &EigenGrid) -> Result<Self> {
        if inst.params() != grid.params() {
            return Err(Error::InvalidParameter("scheme and grid parameters differ".into()));
        }
        let k = grid.len();
        let card = inst.num_vertices();
        let x = int(card as i64);
        let coeffs = (0..k).map(|rs| (0..k).map(|c| grid.u_at(rs, c) / &x).collect()).collect();
        Ok(IdempotentSet { classes: grid.domain().points().to_vec(), card, coeffs })
    }

    pub fn classes(&self) -> &[Index2] {
        &self.classes
    }

    pub fn num_vertices(&self) -> usize {
        self.card
    }

    pub fn coeffs(&self, rs: usize) -> &[ExactScalar] {
        &self.coeffs[rs]
    }

    /// `(E_rs)_{xy}`.
    pub fn entry(&self, inst: &SchemeInstance, rs: usize, x: usize, y: usize) -> &ExactScalar {
        &self.coeffs[rs][inst.class(x, y)]
    }

    /// Least common denominator of all coefficients.
    pub fn common_denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// `scale * E_rs` as a dense integer matrix; `scale` must clear all denominators.
    pub fn dense_scaled(&self, inst: &SchemeInstance, rs: usize, scale: &BigInt) -> Result<Vec<i128>> {
        let vals: Vec<i128> = self.coeffs[rs]
            .iter()
            .map(|c| {
                let v = c * ExactScalar::from_integer(scale.clone());
                if !v.is_integer() {
                    return Err(fail("scale does not clear denominators".into()));
                }
                v.to_integer().to_i128().ok_or_else(|| Error::TooLarge("dense entry exceeds i128".into()))
            })
            .collect::<Result<_>>()?;
        let n = inst.num_vertices();
        Ok((0..n * n).map(|t| vals[inst.class(t / n, t % n)]).collect())
    }

    /// Checks every idempotent identity exactly, in the `A` basis and, for
    /// `|X| <= DENSE_LIMIT`, on dense matrices with exact ranks.
    pub fn verify(&self, inst: &SchemeInstance, p: &BruteTensor, grid: &EigenGrid) -> Result<IdempotentReport> {
        let k = self.classes.len();
        let name = |a: usize| self.classes[a];
        let inv_x = ExactScalar::new(1.into(), (self.card as i64).into());
        if self.coeffs[0].iter().any(|c| c != &inv_x) {
            return Err(fail("E_00 differs from J/|X|".into()));
        }
        let mut checks = 1;
        for c in 0..k {
            let s: ExactScalar = (0..k).map(|rs| &self.coeffs[rs][c]).sum();
            if s != int(i64::from(c == 0)) {
                return Err(fail(format!("sum of E_rs differs from I on class {:?}", name(c))));
            }
        }
        checks += 1;
        for a in 0..k {
            for b in 0..k {
                let prod = bm_mul(p, &self.coeffs[a], &self.coeffs[b]);
                let want = if a == b { self.coeffs[a].clone() } else { vec![ExactScalar::zero(); k] };
                if prod != want {
                    return Err(fail(format!("E{:?} E{:?} is not {}", name(a), name(b), if a == b { "idempotent" } else { "zero" })));
                }
                checks += 1;
            }
        }
        for ij in 0..k {
            let a = unit(k, ij);
            for rs in 0..k {
                let prod = bm_mul(p, &a, &self.coeffs[rs]);
                let t = grid.t_at(ij, rs);
                if prod.iter().zip(&self.coeffs[rs]).any(|(l, r)| l != &(t * r)) {
                    return Err(fail(format!("A{:?} E{:?} != T E{:?}", name(ij), name(rs), name(rs))));
                }
                checks += 1;
            }
            let back: Vec<ExactScalar> =
                (0..k).map(|c| (0..k).map(|rs| grid.t_at(ij, rs) * &self.coeffs[rs][c]).sum()).collect();
            if back != a {
                return Err(fail(format!("A{:?} != sum T E", name(ij))));
            }
            checks += 1;
        }
        if self.card > DENSE_LIMIT {
            return Ok(IdempotentReport { algebra_checks: checks, dense: false, ranks: None });
        }
        let ranks = self.verify_dense(inst, grid)?;
        Ok(IdempotentReport { algebra_checks: checks, dense: true, ranks: Some(ranks) })
    }

    fn verify_dense(&self, inst: &SchemeInstance, grid: &EigenGrid) -> Result<Vec<usize>> {
        let k = self.classes.len();
        let n = self.card;
        let name = |a: usize| self.classes[a];
        let scale = self.common_denominator();
        let mats: Vec<Vec<i128>> = (0..k).map(|rs| self.dense_scaled(inst, rs, &scale)).collect::<Result<_>>()?;
        let bound = mats.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        if bound.checked_mul(bound).and_then(|b| b.checked_mul(n as u128)).map_or(true, |b| b >= 1u128 << 125) {
            return Err(Error::TooLarge("dense idempotent products may overflow".into()));
        }
        let s = scale.to_i128().ok_or_else(|| Error::TooLarge("scale exceeds i128".into()))?;
        let mut sum = vec![0i128; n * n];
        for m in &mats {
            for (o, v) in sum.iter_mut().zip(m) {
                *o += v;
            }
        }
        if (0..n * n).any(|t| sum[t] != if t / n == t % n { s } else { 0 }) {
            return Err(fail("dense: sum of E_rs differs from I".into()));
        }
        for a in 0..k {
            for b in a..k {
                let prod = matmul(&mats[a], &mats[b], n);
                let ok = if a == b {
                    prod.iter().zip(&mats[a]).all(|(l, r)| *l == s * r)
                } else {
                    prod.iter().all(|v| *v == 0)
                };
                if !ok {
                    return Err(fail(format!("dense: E{:?} E{:?}", name(a), name(b))));
                }
            }
        }
        for ij in 0..k {
            let adj = inst.adjacency(ij);
            for rs in 0..k {
                let m = &mats[rs];
                let t = grid.t_at(ij, rs);
                for x in 0..n {
                    let mut row = vec![0i128; n];
                    for &z in adj.row(x) {
                        for (o, v) in row.iter_mut().zip(&m[z as usize * n..(z as usize + 1) * n]) {
                            *o += v;
                        }
                    }
                    let ok = row.iter().zip(&m[x * n..(x + 1) * n]).all(|(l, r)| {
                        ExactScalar::from_integer((*l).into()) == t * ExactScalar::from_integer((*r).into())
                    });
                    if !ok {
                        return Err(fail(format!("dense: A{:?} E{:?} row {x}", name(ij), name(rs))));
                    }
                }
            }
        }
        let mut ranks = Vec::with_capacity(k);
        for (rs, m) in mats.iter().enumerate() {
            let rows = (0..n).map(|x| (0..n).map(|y| BigInt::from(m[x * n + y])).collect()).collect();
            let r = exact_rank(rows);
            if int(r as i64) != *grid.u_at(rs, 0) {
                return Err(fail(format!("rank of E{:?} is {r}, multiplicity {}", name(rs), fmt_exact(grid.u_at(rs, 0)))));
            }
            ranks.push(r);
        }
        Ok(ranks)
    }
}

/// Krein parameters `q_{mn,rs}^{ab}` recovered from the idempotents.
#[derive(Clone, Debug, PartialEq)]
pub struct KreinTensor {
    classes: Vec<Index2>,
    data: Vec<ExactScalar>,
}

#[derive(Serialize)]
struct KreinEntry {
    mn: Index2,
    rs: Index2,
    ab: Index2,
    value: String,
}

impl KreinTensor {
    pub fn classes(&self) -> &[Index2] {
        &self.classes
    }

    fn pos(&self, p: Index2) -> Option<usize> {
        self.classes.iter().position(|&c| c == p)
    }

    pub fn by_index(&self, a: usize, b: usize, c: usize) -> &ExactScalar {
        let k = self.classes.len();
        &self.data[(a * k + b) * k + c]
    }

    pub fn get(&self, mn: Index2, rs: Index2, ab: Index2) -> Option<&ExactScalar> {
        Some(self.by_index(self.pos(mn)?, self.pos(rs)?, self.pos(ab)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let k = self.classes.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let v = self.by_index(a, b, c);
                    if !v.is_zero() {
                        out.push(KreinEntry { mn: self.classes[a], rs: self.classes[b], ab: self.classes[c], value: fmt_exact(v) });
                    }
                }
            }
        }
        serde_json::to_value(out).expect("plain records")
    }
}

/// Expands each `E_mn o E_rs` in the idempotent basis through the trace
/// pairing `<M, N> = sum_xy M_xy N_xy`, read off one entry per class with the
/// counted valencies, and checks the expansion leaves no remainder.
pub fn brute_krein(inst: &SchemeInstance, idem: &IdempotentSet) -> Result<KreinTensor> {
    let k = idem.classes.len();
    let x = int(idem.card as i64);
    let val: Vec<ExactScalar> = inst.valencies()?.into_iter().map(|v| int(v as i64)).collect();
    let mut data = Vec::with_capacity(k * k * k);
    for a in 0..k {
        for b in 0..k {
            let schur: Vec<ExactScalar> = (0..k).map(|c| &idem.coeffs[a][c] * &idem.coeffs[b][c]).collect();
            let mut recon = vec![ExactScalar::zero(); k];
            for e in 0..k {
                let pair: ExactScalar = (0..k).map(|c| &x * &val[c] * &schur[c] * &idem.coeffs[e][c]).sum();
                let trace = &x * &idem.coeffs[e][0];
                let qv = &x * pair / trace;
                for (c, r) in recon.iter_mut().enumerate() {
                    *r += &qv / &x * &idem.coeffs[e][c];
                }
                data.push(qv);
            }
            if recon != schur {
                return Err(fail(format!(
                    "E{:?} o E{:?} is not in the span of the idempotents",
                    idem.classes[a], idem.classes[b]
                )));
            }
        }
    }
    Ok(KreinTensor { classes: idem.classes.clone(), data })
}

/// Nonnegativity of every Krein parameter.
pub fn krein_nonnegative(t: &KreinTensor) -> bool {
    t.data.iter().all(|v| !v.is_negative())
}
