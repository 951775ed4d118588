//! Closed-form intersection numbers and Krein parameters, order
//! compatibility, and the bivariate polynomials `v_ij` and `v*_rs`.

mod bivariate;
mod formulas;
mod order;
mod tensor;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::attenuated::{Domain, Index2, SchemeParams};
use crate::error::Result;
use crate::spectra::EigenGrid;

pub use bivariate::{polys_to_json, BivariatePoly};
pub use formulas::{IntersectionFormulas, KreinFormulas};
pub use order::{order_compare, OrderSpec};
pub use tensor::{Mismatch, ParameterTensor};

/// Upper bound on the witnesses kept in a report.
pub const WITNESS_CAP: usize = 100;

const E10: Index2 = (1, 0);
const E01: Index2 = (0, 1);
const SHIFTS: [i64; 3] = [1, 0, -1];

fn generator_keys(domain: &Domain) -> Vec<Index2> {
    [E10, E01].into_iter().filter(|k| domain.contains(*k)).collect()
}

/// `p_{10,ij}^{ab}` and `p_{01,ij}^{ab}` from their closed forms.
pub fn intersection_formula(params: &SchemeParams) -> Result<ParameterTensor> {
    let f = IntersectionFormulas::new(params)?;
    let dom = params.domain();
    let mut t = ParameterTensor::new(dom.clone(), generator_keys(&dom));
    for &(i, j) in dom.points() {
        for e in SHIFTS {
            for ep in SHIFTS {
                let ab = (i + e, j + ep);
                if !dom.contains(ab) {
                    continue;
                }
                if dom.contains(E10) {
                    t.set(E10, (i, j), ab, f.c_tilde(e as i8, ep as i8, i, j));
                }
                if e == 0 && dom.contains(E01) {
                    t.set(E01, (i, j), ab, f.b_tilde(ep as i8, i, j));
                }
            }
        }
    }
    Ok(t)
}

/// `q_{10,rs}^{ab}` and `q_{01,rs}^{ab}` from their closed forms.
pub fn krein_formula(params: &SchemeParams) -> Result<ParameterTensor> {
    let f = KreinFormulas::new(params)?;
    let dom = params.domain();
    let mut t = ParameterTensor::new(dom.clone(), generator_keys(&dom));
    for &(r, s) in dom.points() {
        for e in SHIFTS {
            for ep in SHIFTS {
                let ab = (r + e, s + ep);
                if !dom.contains(ab) {
                    continue;
                }
                if dom.contains(E01) {
                    t.set(E01, (r, s), ab, f.big_c_tilde(e as i8, ep as i8, r, s)?);
                }
                if ep == 0 && dom.contains(E10) {
                    t.set(E10, (r, s), ab, f.big_b_tilde(e as i8, r, s)?);
                }
            }
        }
    }
    Ok(t)
}

/// Both formula tables of one scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaTensor {
    pub p: ParameterTensor,
    pub q: ParameterTensor,
}

impl FormulaTensor {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        Ok(FormulaTensor { p: intersection_formula(params)?, q: krein_formula(params)? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// A nonzero entry at a target not below `(i,j) + e_k`.
    NotBelow,
    /// `(i,j) + e_k` is in the domain but its entry vanishes.
    MissingLeading,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub key: Index2,
    pub ij: Index2,
    pub ab: Index2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport {
    pub order: String,
    pub checked: usize,
    pub violations: usize,
    /// At most [`WITNESS_CAP`] of the violations.
    pub witnesses: Vec<Witness>,
}

impl CompatReport {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "pass": self.passes(),
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": self.witnesses.iter().map(|w| json!({
                "kind": format!("{:?}", w.kind),
                "key": [w.key.0, w.key.1],
                "ij": [w.ij.0, w.ij.1],
                "ab": [w.ab.0, w.ab.1],
            })).collect::<Vec<_>>(),
        })
    }
}

/// Sparsity pattern of a generator table against a partial order.
pub fn check_compat(table: &ParameterTensor, order: &OrderSpec) -> CompatReport {
    let dom = table.domain();
    let mut checked = 0;
    let mut bad = Vec::new();
    for &key in table.keys() {
        for &ij in dom.points() {
            let top = (ij.0 + key.0, ij.1 + key.1);
            for &ab in dom.points() {
                checked += 1;
                let v = table.get(key, ij, ab);
                if !v.is_zero() && !order.le(ab, top) {
                    bad.push(Witness { kind: WitnessKind::NotBelow, key, ij, ab });
                }
            }
            if dom.contains(top) && table.get(key, ij, top).is_zero() {
                bad.push(Witness { kind: WitnessKind::MissingLeading, key, ij, ab: top });
            }
        }
    }
    let violations = bad.len();
    bad.truncate(WITNESS_CAP);
    CompatReport { order: order.name(), checked, violations, witnesses: bad }
}

pub fn check_p_compat(p: &ParameterTensor) -> CompatReport {
    check_compat(p, &OrderSpec::p_partial())
}

pub fn check_q_compat(q: &ParameterTensor) -> CompatReport {
    check_compat(q, &OrderSpec::q_partial())
}

/// `v_ij` with `T_ij(r,s) = v_ij(T_10(r,s), T_01(r,s))`.
pub fn bivariate_v(p: &ParameterTensor) -> Result<BTreeMap<Index2, BivariatePoly>> {
    bivariate::solve(p.domain(), &bivariate::Scheme { table: p, three: E01, seven: E10, order: OrderSpec::DegLex })
}

/// `v*_rs` with `U_rs(i,j) = v*_rs(U_10(i,j), U_01(i,j))`.
pub fn bivariate_v_star(q: &ParameterTensor) -> Result<BTreeMap<Index2, BivariatePoly>> {
    bivariate::solve(q.domain(), &bivariate::Scheme { table: q, three: E10, seven: E01, order: OrderSpec::DegLexPrime })
}

/// Failures of the polynomial family: wrong multidegree, a monomial outside
/// the partial order, or a grid point where evaluation disagrees.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyReport {
    pub multidegree: Vec<Index2>,
    pub incompatible: Vec<Index2>,
    pub evaluation: Vec<(Index2, Index2)>,
}

impl PolyReport {
    pub fn passes(&self) -> bool {
        self.multidegree.is_empty() && self.incompatible.is_empty() && self.evaluation.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let pairs = |v: &[Index2]| v.iter().map(|p| json!([p.0, p.1])).collect::<Vec<_>>();
        json!({
            "pass": self.passes(),
            "multidegree": pairs(&self.multidegree),
            "incompatible": pairs(&self.incompatible),
            "evaluation": self.evaluation.iter().map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]])).collect::<Vec<_>>(),
        })
    }
}

fn check_polys(
    polys: &BTreeMap<Index2, BivariatePoly>,
    grid: &EigenGrid,
    total: &OrderSpec,
    partial: &OrderSpec,
    dual: bool,
) -> PolyReport {
    let dom = grid.domain();
    let mut rep = PolyReport::default();
    let value = |row: Index2, col: usize| -> crate::exactnum::ExactScalar {
        let Some(a) = dom.index_of(row) else { return Zero::zero() };
        if dual {
            grid.u_at(a, col).clone()
        } else {
            grid.t_at(a, col).clone()
        }
    };
    for (&ij, p) in polys {
        if p.multidegree(total) != Some(ij) {
            rep.multidegree.push(ij);
        }
        if !p.is_compatible(partial, ij) {
            rep.incompatible.push(ij);
        }
        for (c, &rs) in dom.points().iter().enumerate() {
            if p.eval(&value(E10, c), &value(E01, c)) != value(ij, c) {
                rep.evaluation.push((ij, rs));
            }
        }
    }
    rep
}

pub fn verify_v(polys: &BTreeMap<Index2, BivariatePoly>, grid: &EigenGrid) -> PolyReport {
    check_polys(polys, grid, &OrderSpec::DegLex, &OrderSpec::p_partial(), false)
}

pub fn verify_v_star(polys: &BTreeMap<Index2, BivariatePoly>, grid: &EigenGrid) -> PolyReport {
    check_polys(polys, grid, &OrderSpec::DegLexPrime, &OrderSpec::q_partial(), true)
}
