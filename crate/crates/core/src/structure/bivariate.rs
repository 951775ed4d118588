use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::order::OrderSpec;
use super::tensor::ParameterTensor;
use crate::attenuated::{Domain, Index2};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_exact, ExactScalar};

/// Polynomial in two variables `x, y` with exact coefficients, keyed by exponent pair.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BivariatePoly {
    coeffs: BTreeMap<Index2, ExactScalar>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(e: Index2, c: ExactScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn one() -> Self {
        Self::monomial((0, 0), ExactScalar::one())
    }

    pub fn coeffs(&self) -> &BTreeMap<Index2, ExactScalar> {
        &self.coeffs
    }

    pub fn coeff(&self, e: Index2) -> ExactScalar {
        self.coeffs.get(&e).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn add_term(&mut self, e: Index2, c: ExactScalar) {
        let slot = self.coeffs.entry(e).or_insert_with(ExactScalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &ExactScalar) {
        for (&e, v) in &o.coeffs {
            self.add_term(e, v * c);
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Multiply by `x^dx y^dy`.
    pub fn shift(&self, d: Index2) -> Self {
        BivariatePoly { coeffs: self.coeffs.iter().map(|(&(a, b), v)| ((a + d.0, b + d.1), v.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &ExactScalar, y: &ExactScalar) -> ExactScalar {
        self.coeffs.iter().map(|(&(a, b), c)| c * x.pow(a as i32) * y.pow(b as i32)).sum()
    }

    /// Leading exponent with respect to a monomial order.
    pub fn multidegree(&self, order: &OrderSpec) -> Option<Index2> {
        self.coeffs.keys().copied().max_by(|a, b| order.compare(*a, *b).unwrap_or(Ordering::Equal))
    }

    /// Every monomial lies below `target` in the partial order.
    pub fn is_compatible(&self, order: &OrderSpec, target: Index2) -> bool {
        self.coeffs.keys().all(|&e| order.le(e, target))
    }

    pub fn to_json(&self) -> Value {
        let m: serde_json::Map<String, Value> =
            self.coeffs.iter().map(|(&(a, b), c)| (format!("{a},{b}"), json!(fmt_exact(c)))).collect();
        Value::Object(m)
    }
}

/// Terms by descending total degree, e.g. `x^2 - 3/2*x*y + 1`.
impl std::fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by_key(|(&(a, b), _)| std::cmp::Reverse((a + b, a)));
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(a, b), c)) in terms.into_iter().enumerate() {
            let neg = c < &ExactScalar::zero();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = if neg { -c.clone() } else { c.clone() };
            let mut parts = Vec::new();
            if !mag.is_one() || (a, b) == (0, 0) {
                parts.push(fmt_exact(&mag));
            }
            for (v, e) in [("x", a), ("y", b)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// How one family of polynomials is generated from a parameter table.
pub(crate) struct Scheme<'a> {
    pub table: &'a ParameterTensor,
    /// Key whose relation has three terms, and the direction it advances.
    pub three: Index2,
    /// Key of the relation with up to seven terms.
    pub seven: Index2,
    pub order: OrderSpec,
}

/// Solve `x_key v_src = sum_ab t_{key,src}^{ab} v_ab` for the leading term in
/// ascending monomial order, from `v_00 = 1`, `v_10 = x`, `v_01 = y`.
pub(crate) fn solve(domain: &Domain, s: &Scheme<'_>) -> Result<BTreeMap<Index2, BivariatePoly>> {
    let mut pts = domain.points().to_vec();
    pts.sort_by(|a, b| s.order.compare(*a, *b).expect("total order"));
    let mut out: BTreeMap<Index2, BivariatePoly> = BTreeMap::new();
    out.insert((0, 0), BivariatePoly::one());
    for &t in &pts {
        if t == (0, 0) {
            continue;
        }
        if t == (1, 0) || t == (0, 1) {
            out.insert(t, BivariatePoly::monomial(t, ExactScalar::one()));
            continue;
        }
        let back = |d: Index2| (t.0 - d.0, t.1 - d.1);
        let (key, src) = if domain.contains(back(s.three)) { (s.three, back(s.three)) } else { (s.seven, back(s.seven)) };
        if !domain.contains(src) {
            return Err(Error::RecurrenceDegenerate(t.0, t.1));
        }
        let lead = s.table.get(key, src, t);
        if lead.is_zero() {
            return Err(Error::RecurrenceDegenerate(t.0, t.1));
        }
        let mut acc = out[&src].shift(key);
        for &ab in domain.points() {
            if ab == t {
                continue;
            }
            let c = s.table.get(key, src, ab);
            if c.is_zero() {
                continue;
            }
            let v = out
                .get(&ab)
                .ok_or(Error::RecurrenceDegenerate(t.0, t.1))?;
            acc.add_scaled(v, &-c);
        }
        out.insert(t, acc.scale(&(ExactScalar::one() / lead)));
    }
    Ok(out)
}

pub fn polys_to_json(polys: &BTreeMap<Index2, BivariatePoly>) -> Value {
    let m: serde_json::Map<String, Value> = polys.iter().map(|(&(i, j), p)| (format!("{i},{j}"), p.to_json())).collect();
    Value::Object(m)
}
