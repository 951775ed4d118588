//! The scheme on an attenuated space, built from subspaces of `F_q^{n+l}`.
//!
//! `w` is the span of the last `l` standard basis vectors. A subspace meets
//! `w` trivially exactly when its RREF has every pivot among the first `n`
//! columns, so enumeration walks pivot sets in `[0, n)` and free entries and
//! never has to reject anything.

mod brute;
mod field;
mod io;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{q_binomial, ExactScalar, QValue};
use crate::par::map_range;

pub use brute::{brute_intersection_numbers, brute_intersection_numbers_from, BruteTensor};
pub use field::{FieldContext, SUPPORTED_ORDERS};
pub use io::{read_scheme, write_scheme, FORMAT_MAGIC, FORMAT_VERSION};

/// A relation or eigenspace label `(i, j)`.
pub type Index2 = (i64, i64);

/// Refuse to build schemes whose class matrix would exceed this many vertices.
pub const MAX_VERTICES: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeParams {
    pub q: u64,
    pub n: i64,
    pub l: i64,
    pub m: i64,
}

impl SchemeParams {
    pub fn new(q: u64, n: i64, l: i64, m: i64) -> Result<Self> {
        let p = SchemeParams { q, n, l, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 0 || self.m > self.n || self.l < 0 {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= m <= n and l >= 0, got n={} l={} m={}",
                self.n, self.l, self.m
            )));
        }
        self.qvalue().map(|_| ())
    }

    pub fn qvalue(&self) -> Result<QValue> {
        QValue::from_order(self.q)
    }

    pub fn domain(&self) -> Domain {
        Domain::new(self.n, self.l, self.m)
    }

    /// `q^{ml} [n, m]_q`.
    pub fn cardinality(&self) -> Result<ExactScalar> {
        let q = self.qvalue()?;
        Ok(q.pow(self.m * self.l) * q_binomial(self.n, self.m, q.value()))
    }
}

impl std::fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(q={}, n={}, l={}, m={})", self.q, self.n, self.l, self.m)
    }
}

/// Index points `(a, b)` with `a + b <= m`, `a <= n - m`, `b <= l`, in deg-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    points: Vec<Index2>,
    lookup: HashMap<Index2, usize>,
}

impl Domain {
    pub fn new(n: i64, l: i64, m: i64) -> Self {
        let mut points = Vec::new();
        for t in 0..=m {
            for a in 0..=t {
                let b = t - a;
                if a <= n - m && b <= l {
                    points.push((a, b));
                }
            }
        }
        let lookup = points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        Domain { points, lookup }
    }

    pub fn points(&self) -> &[Index2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Index2) -> bool {
        self.lookup.contains_key(&p)
    }

    pub fn index_of(&self, p: Index2) -> Option<usize> {
        self.lookup.get(&p).copied()
    }

    pub fn require(&self, p: Index2) -> Result<usize> {
        self.index_of(p).ok_or(Error::OutOfDomain(p.0, p.1))
    }
}

/// A subspace given by its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    dim: usize,
    width: usize,
    data: Vec<u8>,
}

impl SubspaceBasis {
    /// Canonicalizes the row space of `rows`; zero rows are dropped.
    pub fn from_rows(field: &FieldContext, rows: Vec<Vec<u8>>, width: usize) -> Result<Self> {
        let mut rows = rows;
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter("ragged basis rows".into()));
        }
        let piv = field.rref(&mut rows);
        rows.truncate(piv.len());
        Ok(SubspaceBasis { dim: piv.len(), width, data: rows.concat() })
    }

    fn from_rref_data(dim: usize, width: usize, data: Vec<u8>) -> Self {
        SubspaceBasis { dim, width, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, k: usize) -> &[u8] {
        &self.data[k * self.width..(k + 1) * self.width]
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim)
            .map(|k| self.row(k).iter().position(|&x| x != 0).unwrap_or(self.width))
            .collect()
    }

    /// Pivots strictly increasing, each pivot 1, pivot columns zero elsewhere.
    pub fn is_canonical(&self) -> bool {
        let piv = self.pivots();
        if piv.windows(2).any(|w| w[0] >= w[1]) || piv.last().is_some_and(|&p| p >= self.width) {
            return false;
        }
        piv.iter()
            .enumerate()
            .all(|(k, &c)| (0..self.dim).all(|r| self.row(r)[c] == u8::from(r == k)))
    }

    /// `x ∩ w = 0` for `w` spanned by the trailing `l` coordinates.
    pub fn avoids_tail(&self, n: usize) -> bool {
        self.pivots().iter().all(|&p| p < n)
    }
}

/// Sorted row lists of a symmetric 01 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    pub row_ptr: Vec<u32>,
    pub cols: Vec<u32>,
}

impl Adjacency {
    pub fn row(&self, x: usize) -> &[u32] {
        &self.cols[self.row_ptr[x] as usize..self.row_ptr[x + 1] as usize]
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }
}

#[derive(Clone, Debug)]
pub struct SchemeInstance {
    params: SchemeParams,
    field: FieldContext,
    domain: Domain,
    w: SubspaceBasis,
    vertices: Vec<u8>,
    num_vertices: usize,
    /// `relation[x * |X| + y]` is the domain index of the class of `(x, y)`.
    relation: Vec<u8>,
    adjacency: Vec<Adjacency>,
    lookup: HashMap<Vec<u8>, usize>,
}

impl PartialEq for SchemeInstance {
    fn eq(&self, o: &Self) -> bool {
        self.params == o.params && self.vertices == o.vertices && self.relation == o.relation
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            if n - c < k - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn check_size(params: &SchemeParams) -> Result<usize> {
    let card = params.cardinality()?;
    let limit = ExactScalar::from_integer((MAX_VERTICES as i64).into());
    if card > limit {
        return Err(Error::TooLarge(format!("{params} has {card} vertices, limit {MAX_VERTICES}")));
    }
    Ok(card.to_integer().try_into().expect("bounded above"))
}

/// Flat RREF data of every vertex, `m * (n + l)` bytes each, in canonical order.
fn enumerate_flat(field: &FieldContext, params: &SchemeParams) -> Vec<u8> {
    let (n, l, m) = (params.n as usize, params.l as usize, params.m as usize);
    let width = n + l;
    let q = field.order();
    let mut out = Vec::new();
    for piv in combinations(n, m) {
        let mut free = Vec::new();
        for (r, &p) in piv.iter().enumerate() {
            for c in p + 1..width {
                if !piv.contains(&c) {
                    free.push(r * width + c);
                }
            }
        }
        let mut digits = vec![0u8; free.len()];
        loop {
            let mut v = vec![0u8; m * width];
            for (r, &p) in piv.iter().enumerate() {
                v[r * width + p] = 1;
            }
            for (&pos, &d) in free.iter().zip(&digits) {
                v[pos] = d;
            }
            out.extend_from_slice(&v);
            // odometer, last free entry fastest
            let mut carry = true;
            let mut k = digits.len();
            while carry && k > 0 {
                k -= 1;
                digits[k] += 1;
                if (digits[k] as usize) < q {
                    carry = false;
                } else {
                    digits[k] = 0;
                }
            }
            if carry {
                break;
            }
        }
    }
    out
}

/// Every `m`-dimensional subspace of `F_q^{n+l}` meeting `w` trivially.
pub fn enumerate_vertices(params: &SchemeParams) -> Result<Vec<SubspaceBasis>> {
    params.validate()?;
    check_size(params)?;
    let field = FieldContext::new(params.q)?;
    let (m, width) = (params.m as usize, (params.n + params.l) as usize);
    let flat = enumerate_flat(&field, params);
    let chunk = (m * width).max(1);
    let count = if m == 0 { 1 } else { flat.len() / chunk };
    Ok((0..count)
        .map(|k| {
            let data = if m == 0 { Vec::new() } else { flat[k * chunk..(k + 1) * chunk].to_vec() };
            SubspaceBasis::from_rref_data(m, width, data)
        })
        .collect())
}

/// `(i, j)` with `i = m - dim` of the meet of the images mod `w` and `j = m - i - dim(x ∩ y)`.
pub fn relation_of(field: &FieldContext, params: &SchemeParams, x: &SubspaceBasis, y: &SubspaceBasis) -> Result<Index2> {
    let (n, m) = (params.n as usize, params.m as usize);
    if x.dim != m || y.dim != m || x.width != y.width || x.width != n + params.l as usize {
        return Err(Error::InvalidParameter("vertices of the wrong shape".into()));
    }
    let rel = raw_relation(field, n, m, x.width, &x.data, &y.data);
    if !params.domain().contains(rel) {
        return Err(Error::Invariant(format!("relation {rel:?} outside the domain")));
    }
    Ok(rel)
}

fn raw_relation(field: &FieldContext, n: usize, m: usize, width: usize, x: &[u8], y: &[u8]) -> Index2 {
    let mut buf = Vec::with_capacity(2 * m * width);
    buf.extend_from_slice(x);
    buf.extend_from_slice(y);
    let (proj, full) = field.split_rank(&mut buf, 2 * m, width, n);
    let i = proj as i64 - m as i64;
    (i, full as i64 - m as i64 - i)
}

impl SchemeInstance {
    /// Enumerates, assigns relations and checks axioms (i)-(iii). Axiom (iv)
    /// is the constancy check done by [`brute_intersection_numbers`]; see
    /// [`build_scheme`] for the fully verified entry point.
    pub fn construct(params: &SchemeParams) -> Result<Self> {
        params.validate()?;
        let nv = check_size(params)?;
        let field = FieldContext::new(params.q)?;
        let domain = params.domain();
        let (n, l, m) = (params.n as usize, params.l as usize, params.m as usize);
        let width = n + l;
        let vertices = enumerate_flat(&field, params);
        let chunk = m * width;
        if (m > 0 && vertices.len() != nv * chunk) || (m == 0 && nv != 1) {
            return Err(Error::Invariant(format!("enumerated {} vertices, expected {nv}", vertices.len() / chunk.max(1))));
        }
        let vert = |k: usize| &vertices[k * chunk..(k + 1) * chunk];
        let rows: Vec<Result<Vec<u8>>> = map_range(nv, |x| {
            (0..nv)
                .map(|y| {
                    let rel = raw_relation(&field, n, m, width, vert(x), vert(y));
                    domain
                        .index_of(rel)
                        .map(|c| c as u8)
                        .ok_or_else(|| Error::Invariant(format!("pair ({x}, {y}) has relation {rel:?} outside the domain")))
                })
                .collect()
        });
        let mut relation = Vec::with_capacity(nv * nv);
        for r in rows {
            relation.extend(r?);
        }
        let inst = Self::assemble(*params, field, domain, vertices, nv, relation);
        inst.check_basic_axioms()?;
        Ok(inst)
    }

    fn assemble(
        params: SchemeParams,
        field: FieldContext,
        domain: Domain,
        vertices: Vec<u8>,
        nv: usize,
        relation: Vec<u8>,
    ) -> Self {
        let (n, l) = (params.n as usize, params.l as usize);
        let width = n + l;
        let w_rows = (0..l)
            .map(|k| {
                let mut r = vec![0u8; width];
                r[n + k] = 1;
                r
            })
            .collect();
        let w = SubspaceBasis::from_rows(&field, w_rows, width).expect("coordinate rows");
        let k = domain.len();
        let mut adjacency = Vec::with_capacity(k);
        for c in 0..k as u8 {
            let mut row_ptr = Vec::with_capacity(nv + 1);
            let mut cols = Vec::new();
            row_ptr.push(0u32);
            for x in 0..nv {
                cols.extend((0..nv).filter(|&y| relation[x * nv + y] == c).map(|y| y as u32));
                row_ptr.push(cols.len() as u32);
            }
            adjacency.push(Adjacency { row_ptr, cols });
        }
        let chunk = params.m as usize * width;
        let lookup = (0..nv)
            .map(|v| (vertices[v * chunk..(v + 1) * chunk].to_vec(), v))
            .collect();
        SchemeInstance { params, field, domain, w, vertices, num_vertices: nv, relation, adjacency, lookup }
    }

    /// (i) `A_00 = I`, (ii) the classes partition `X x X` and each is nonempty,
    /// (iii) every `A_ij` is symmetric.
    pub fn check_basic_axioms(&self) -> Result<()> {
        let nv = self.num_vertices;
        for x in 0..nv {
            for y in 0..nv {
                let c = self.relation[x * nv + y];
                if (c == 0) != (x == y) {
                    return Err(Error::Axiom {
                        axiom: "i",
                        detail: format!("pair ({x}, {y}) has class {:?}", self.domain.points()[c as usize]),
                    });
                }
                if self.relation[y * nv + x] != c {
                    return Err(Error::Axiom { axiom: "iii", detail: format!("pair ({x}, {y}) is not symmetric") });
                }
            }
        }
        let total: usize = self.adjacency.iter().map(Adjacency::nnz).sum();
        if total != nv * nv {
            return Err(Error::Axiom { axiom: "ii", detail: format!("classes cover {total} of {} pairs", nv * nv) });
        }
        for (k, a) in self.adjacency.iter().enumerate() {
            if a.nnz() == 0 {
                return Err(Error::Axiom {
                    axiom: "ii",
                    detail: format!("class {:?} is empty", self.domain.points()[k]),
                });
            }
        }
        Ok(())
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn w(&self) -> &SubspaceBasis {
        &self.w
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn width(&self) -> usize {
        (self.params.n + self.params.l) as usize
    }

    pub fn vertex(&self, k: usize) -> SubspaceBasis {
        let chunk = self.params.m as usize * self.width();
        SubspaceBasis::from_rref_data(self.params.m as usize, self.width(), self.vertices[k * chunk..(k + 1) * chunk].to_vec())
    }

    pub(crate) fn vertex_bytes(&self) -> &[u8] {
        &self.vertices
    }

    pub fn index_of(&self, v: &SubspaceBasis) -> Option<usize> {
        self.lookup.get(&v.data).copied()
    }

    /// Domain index of the class of `(x, y)`.
    #[inline]
    pub fn class(&self, x: usize, y: usize) -> usize {
        self.relation[x * self.num_vertices + y] as usize
    }

    pub fn relation_label(&self, x: usize, y: usize) -> Index2 {
        self.domain.points()[self.class(x, y)]
    }

    pub fn class_row(&self, x: usize) -> &[u8] {
        &self.relation[x * self.num_vertices..(x + 1) * self.num_vertices]
    }

    pub fn adjacency(&self, c: usize) -> &Adjacency {
        &self.adjacency[c]
    }

    pub fn adjacency_of(&self, p: Index2) -> Result<&Adjacency> {
        Ok(&self.adjacency[self.domain.require(p)?])
    }

    /// Row sums of each `A_ij`, which must be constant.
    pub fn valencies(&self) -> Result<Vec<u64>> {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let v = a.row(0).len();
                if (0..self.num_vertices).any(|x| a.row(x).len() != v) {
                    return Err(Error::Axiom {
                        axiom: "iv",
                        detail: format!("row sums of A{:?} are not constant", self.domain.points()[k]),
                    });
                }
                Ok(v as u64)
            })
            .collect()
    }

    /// Integer entries `sum_c coeffs[c] A_c`.
    pub fn dense_combination(&self, coeffs: &[i128]) -> Vec<i128> {
        self.relation.iter().map(|&c| coeffs[c as usize]).collect()
    }
}

/// Enumerates, assigns relations and verifies axioms (i)-(iv), including
/// constancy and symmetry of every structure constant.
pub fn build_scheme(params: &SchemeParams) -> Result<(SchemeInstance, BruteTensor)> {
    let inst = SchemeInstance::construct(params)?;
    let tensor = brute_intersection_numbers(&inst)?;
    Ok((inst, tensor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn params(q: u64, n: i64, l: i64, m: i64) -> SchemeParams {
        SchemeParams::new(q, n, l, m).unwrap()
    }

    #[test]
    fn spec_counts() {
        assert_eq!(enumerate_vertices(&params(2, 3, 2, 0)).unwrap().len(), 1);
        assert_eq!(enumerate_vertices(&params(2, 3, 2, 2)).unwrap().len(), 112);
        assert_eq!(enumerate_vertices(&params(3, 2, 1, 1)).unwrap().len(), 12);
        assert!(matches!(SchemeParams::new(6, 3, 2, 2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn domain_points() {
        assert_eq!(Domain::new(3, 2, 2).points(), &[(0, 0), (0, 1), (1, 0), (0, 2), (1, 1)]);
        assert_eq!(Domain::new(4, 2, 2).len(), 6);
    }

    #[test]
    fn counts_match_cardinality() {
        for q in [2u64, 3, 4] {
            for n in 0..=4 {
                for l in 0..=2 {
                    for m in 0..=n {
                        let p = params(q, n, l, m);
                        let card = p.cardinality().unwrap();
                        if card > int(3000) {
                            continue;
                        }
                        let vs = enumerate_vertices(&p).unwrap();
                        assert_eq!(int(vs.len() as i64), card, "{p}");
                        assert!(vs.iter().all(|v| v.is_canonical() && v.avoids_tail(n as usize)));
                        assert!(vs.windows(2).all(|w| w[0] != w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn class_sizes_at_2_3_2_2() {
        let inst = SchemeInstance::construct(&params(2, 3, 2, 2)).unwrap();
        let mut sizes: Vec<(Index2, usize)> = inst
            .domain()
            .points()
            .iter()
            .map(|&p| (p, inst.adjacency_of(p).unwrap().row(0).len()))
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![((0, 0), 1), ((0, 1), 9), ((0, 2), 6), ((1, 0), 24), ((1, 1), 72)]);
        let x = inst.vertex(5);
        let f = inst.field();
        assert_eq!(relation_of(f, inst.params(), &x, &x).unwrap(), (0, 0));
        for y in [0, 17, 111] {
            let y = inst.vertex(y);
            let a = relation_of(f, inst.params(), &x, &y).unwrap();
            assert_eq!(a, relation_of(f, inst.params(), &y, &x).unwrap());
        }
    }

    #[test]
    fn single_vertex_edge_case() {
        let (inst, t) = build_scheme(&params(3, 2, 4, 0)).unwrap();
        assert_eq!(inst.num_vertices(), 1);
        assert_eq!(inst.domain().points(), &[(0, 0)]);
        assert_eq!(t.get((0, 0), (0, 0), (0, 0)), Some(1));
    }

    #[test]
    fn index_lookup() {
        let inst = SchemeInstance::construct(&params(3, 2, 1, 1)).unwrap();
        let f = inst.field().clone();
        for k in 0..inst.num_vertices() {
            let v = inst.vertex(k);
            // rescaled rows give the same subspace
            let rows: Vec<Vec<u8>> = (0..v.dim()).map(|r| v.row(r).iter().map(|&e| f.mul(e, 2)).collect()).collect();
            let again = SubspaceBasis::from_rows(&f, rows, v.width()).unwrap();
            assert_eq!(inst.index_of(&again), Some(k));
        }
    }
}
