//! Explicit `J_r(n, m)` on weight-`m` words.

use num_traits::ToPrimitive;

use super::{t_tilde, JohnsonParams, MAX_JOHNSON_VERTICES};
use crate::attenuated::{Domain, Index2};
use crate::error::{Error, Result};
use crate::exactnum::{int, ExactScalar};
use crate::par::map_range;

#[derive(Clone, Debug)]
pub struct JohnsonScheme {
    params: JohnsonParams,
    domain: Domain,
    words: Vec<Vec<u8>>,
    relation: Vec<u8>,
    /// `p[(c1 * k + c2) * k + c3]`, filled by the axiom check.
    p: Vec<u64>,
}

fn supports(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            go(c + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// `(i, j)` with `c = m - i` shared support positions and `e = m - i - j` agreeing letters.
pub fn johnson_relation(m: i64, x: &[u8], y: &[u8]) -> Index2 {
    let (mut c, mut e) = (0, 0);
    for (a, b) in x.iter().zip(y) {
        if *a != 0 && *b != 0 {
            c += 1;
            if a == b {
                e += 1;
            }
        }
    }
    (m - c, c - e)
}

/// Builds `J_r(n, m)` and checks axioms (i)-(iv) by counting.
pub fn enumerate_johnson(params: &JohnsonParams) -> Result<JohnsonScheme> {
    params.validate()?;
    let card = params.cardinality();
    if card > int(MAX_JOHNSON_VERTICES as i64) {
        return Err(Error::TooLarge(format!("{params} has {card} vertices, limit {MAX_JOHNSON_VERTICES}")));
    }
    let nv = card.to_integer().to_usize().expect("bounded above");
    let (n, m, r) = (params.n as usize, params.m as usize, params.r as u8);
    let mut words = Vec::with_capacity(nv);
    for supp in supports(n, m) {
        let mut letters = vec![1u8; m];
        loop {
            let mut w = vec![0u8; n];
            for (&p, &a) in supp.iter().zip(&letters) {
                w[p] = a;
            }
            words.push(w);
            let mut k = m;
            let mut carry = true;
            while carry && k > 0 {
                k -= 1;
                letters[k] += 1;
                if letters[k] < r {
                    carry = false;
                } else {
                    letters[k] = 1;
                }
            }
            if carry {
                break;
            }
        }
    }
    if words.len() != nv {
        return Err(Error::Invariant(format!("enumerated {} words, expected {nv}", words.len())));
    }
    let domain = params.relation_domain();
    let rows: Vec<Result<Vec<u8>>> = map_range(nv, |x| {
        words
            .iter()
            .map(|y| {
                let rel = johnson_relation(params.m, &words[x], y);
                domain.index_of(rel).map(|c| c as u8).ok_or(Error::OutOfDomain(rel.0, rel.1))
            })
            .collect()
    });
    let mut relation = Vec::with_capacity(nv * nv);
    for r in rows {
        relation.extend(r?);
    }
    let mut s = JohnsonScheme { params: *params, domain, words, relation, p: Vec::new() };
    s.check_axioms()?;
    Ok(s)
}

impl JohnsonScheme {
    pub fn params(&self) -> &JohnsonParams {
        &self.params
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn num_vertices(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, k: usize) -> &[u8] {
        &self.words[k]
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn class(&self, x: usize, y: usize) -> usize {
        self.relation[x * self.words.len() + y] as usize
    }

    pub fn relation_label(&self, x: usize, y: usize) -> Index2 {
        self.domain.points()[self.class(x, y)]
    }

    /// Row sums per relation, in domain order.
    pub fn valencies(&self) -> Vec<u64> {
        let k = self.domain.len();
        let mut v = vec![0u64; k];
        for y in 0..self.num_vertices() {
            v[self.class(0, y)] += 1;
        }
        v
    }

    /// `p_{c1 c2}^{c3}` by domain index.
    pub fn intersection_number(&self, c1: usize, c2: usize, c3: usize) -> u64 {
        let k = self.domain.len();
        self.p[(c1 * k + c2) * k + c3]
    }

    fn check_axioms(&mut self) -> Result<()> {
        let nv = self.num_vertices();
        let k = self.domain.len();
        let label = |c: usize| self.domain.points()[c];
        for x in 0..nv {
            for y in 0..nv {
                let c = self.class(x, y);
                if (c == 0) != (x == y) {
                    return Err(Error::Axiom { axiom: "i", detail: format!("pair ({x}, {y}) has class {:?}", label(c)) });
                }
                if self.class(y, x) != c {
                    return Err(Error::Axiom { axiom: "iii", detail: format!("pair ({x}, {y}) is not symmetric") });
                }
            }
        }
        // every (x, z) pair, counting y; tables are merged and must agree
        let tables: Vec<Vec<Option<u64>>> = map_range(nv, |x| {
            let mut t: Vec<Option<u64>> = vec![None; k * k * k];
            let mut cnt = vec![0u64; k * k];
            for z in 0..nv {
                cnt.iter_mut().for_each(|c| *c = 0);
                for y in 0..nv {
                    cnt[self.class(x, y) * k + self.class(y, z)] += 1;
                }
                let c3 = self.class(x, z);
                for (c12, &v) in cnt.iter().enumerate() {
                    match t[c12 * k + c3] {
                        None => t[c12 * k + c3] = Some(v),
                        Some(w) if w != v => t[c12 * k + c3] = Some(u64::MAX),
                        _ => {}
                    }
                }
            }
            t
        });
        let mut p = vec![None; k * k * k];
        for t in &tables {
            for (s, &v) in t.iter().enumerate() {
                let v = match v {
                    None => continue,
                    Some(v) => v,
                };
                if v == u64::MAX || p[s].is_some_and(|w| w != v) {
                    let (c1, c2, c3) = (s / (k * k), (s / k) % k, s % k);
                    return Err(Error::Axiom {
                        axiom: "iv",
                        detail: format!("p_{:?},{:?}^{:?} is not constant", label(c1), label(c2), label(c3)),
                    });
                }
                p[s] = Some(v);
            }
        }
        if let Some(s) = p.iter().position(Option::is_none) {
            return Err(Error::Axiom { axiom: "ii", detail: format!("class {:?} is empty", label(s % k)) });
        }
        self.p = p.into_iter().map(|v| v.unwrap()).collect();
        Ok(())
    }

    /// Checks that `T~_ji(x, y)` is a character of the counted algebra:
    /// `T~(R_a) T~(R_b) = sum_c p_ab^c T~(R_c)` at every eigen index, and that
    /// `T~(R_a)(0, 0)` is the valency. Returns descriptions of failures.
    pub fn verify_eigens(&self) -> Vec<String> {
        let JohnsonParams { r, n, m } = self.params;
        let k = self.domain.len();
        let rels = self.domain.points();
        let val = self.valencies();
        let mut out = Vec::new();
        let tv = |c: usize, xy: Index2| -> ExactScalar {
            let (i, j) = rels[c];
            t_tilde(r, n, m, j, i, xy.0, xy.1)
        };
        for c in 0..k {
            let t = tv(c, (0, 0));
            if t != int(val[c] as i64) {
                out.push(format!("valency of R{:?}: counted {}, formula {}", rels[c], val[c], t));
            }
        }
        for xy in self.params.eigen_domain() {
            let t: Vec<ExactScalar> = (0..k).map(|c| tv(c, xy)).collect();
            for a in 0..k {
                for b in 0..k {
                    let rhs: ExactScalar = (0..k).map(|c| int(self.intersection_number(a, b, c) as i64) * &t[c]).sum();
                    if &t[a] * &t[b] != rhs {
                        out.push(format!("character at {xy:?} fails for R{:?} R{:?}", rels[a], rels[b]));
                    }
                }
            }
        }
        out
    }
}
