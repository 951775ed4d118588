//! Intersection numbers by counting.
//!
//! For a base vertex `x` we tabulate `cnt[c1][c2][z] = #{y : (x,y) in c1, (y,z) in c2}`
//! in one pass over `y`. Reading `cnt` at every `z` gives `p_{c1 c2}^{class(x,z)}`
//! once per pair `(x, z)`, so constancy over each class is checked as a side effect.

use serde::Serialize;

use super::{Index2, SchemeInstance};
use crate::error::{Error, Result};
use crate::par::map_range;

const UNSET: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteTensor {
    classes: Vec<Index2>,
    /// `data[(c1 * k + c2) * k + c3]`.
    data: Vec<u64>,
    /// Base vertices the counts were taken from.
    bases: Vec<usize>,
}

#[derive(Serialize)]
struct Entry {
    mn: Index2,
    ij: Index2,
    ab: Index2,
    value: u64,
}

impl BruteTensor {
    pub fn classes(&self) -> &[Index2] {
        &self.classes
    }

    pub fn bases(&self) -> &[usize] {
        &self.bases
    }

    fn pos(&self, p: Index2) -> Option<usize> {
        self.classes.iter().position(|&c| c == p)
    }

    /// `p_{mn, ij}^{ab}`.
    pub fn get(&self, mn: Index2, ij: Index2, ab: Index2) -> Option<u64> {
        let k = self.classes.len();
        let (a, b, c) = (self.pos(mn)?, self.pos(ij)?, self.pos(ab)?);
        Some(self.data[(a * k + b) * k + c])
    }

    pub fn by_index(&self, c1: usize, c2: usize, c3: usize) -> u64 {
        let k = self.classes.len();
        self.data[(c1 * k + c2) * k + c3]
    }

    /// Nonzero entries as `{mn, ij, ab, value}` records.
    pub fn to_json(&self) -> serde_json::Value {
        let k = self.classes.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let value = self.by_index(a, b, c);
                    if value != 0 {
                        out.push(Entry { mn: self.classes[a], ij: self.classes[b], ab: self.classes[c], value });
                    }
                }
            }
        }
        serde_json::to_value(out).expect("plain records")
    }
}

fn counts_from(inst: &SchemeInstance, x: usize) -> Vec<u64> {
    let nv = inst.num_vertices();
    let k = inst.domain().len();
    let mut cnt = vec![0u32; k * k * nv];
    let row_x = inst.class_row(x);
    for y in 0..nv {
        let c1 = row_x[y] as usize;
        let row_y = inst.class_row(y);
        for (z, &c2) in row_y.iter().enumerate() {
            cnt[(c1 * k + c2 as usize) * nv + z] += 1;
        }
    }
    let mut local = vec![UNSET; k * k * k];
    for c12 in 0..k * k {
        for z in 0..nv {
            let c3 = row_x[z] as usize;
            let v = cnt[c12 * nv + z] as u64;
            let slot = &mut local[c12 * k + c3];
            if *slot == UNSET {
                *slot = v;
            } else if *slot != v {
                // encode the disagreement; reported by the caller
                *slot = UNSET - 1;
            }
        }
    }
    local
}

/// Counts from every vertex, so constancy is checked on all triples.
pub fn brute_intersection_numbers(inst: &SchemeInstance) -> Result<BruteTensor> {
    let all: Vec<usize> = (0..inst.num_vertices()).collect();
    brute_intersection_numbers_from(inst, &all)
}

/// Counts from the given base vertices only.
pub fn brute_intersection_numbers_from(inst: &SchemeInstance, bases: &[usize]) -> Result<BruteTensor> {
    let k = inst.domain().len();
    let classes = inst.domain().points().to_vec();
    let label = |t: usize| {
        let (a, r) = (t / (k * k), t % (k * k));
        (classes[a], classes[r / k], classes[r % k])
    };
    if bases.is_empty() || bases.iter().any(|&b| b >= inst.num_vertices()) {
        return Err(Error::InvalidParameter("base vertices out of range".into()));
    }
    let tables = map_range(bases.len(), |t| counts_from(inst, bases[t]));
    let mut data = vec![UNSET; k * k * k];
    for (t, local) in tables.iter().enumerate() {
        for (s, &v) in local.iter().enumerate() {
            if v == UNSET - 1 || (data[s] != UNSET && v != UNSET && data[s] != v) {
                let (mn, ij, ab) = label(s);
                return Err(Error::Axiom {
                    axiom: "iv",
                    detail: format!("p_{mn:?},{ij:?}^{ab:?} is not constant (base vertex {})", bases[t]),
                });
            }
            if v != UNSET {
                data[s] = v;
            }
        }
    }
    for (s, v) in data.iter_mut().enumerate() {
        if *v == UNSET {
            let (mn, ij, ab) = label(s);
            return Err(Error::Axiom { axiom: "ii", detail: format!("no pair realizes {ab:?} for p_{mn:?},{ij:?}") });
        }
    }
    let tensor = BruteTensor { classes: classes.clone(), data, bases: bases.to_vec() };
    for a in 0..k {
        for b in 0..a {
            for c in 0..k {
                if tensor.by_index(a, b, c) != tensor.by_index(b, a, c) {
                    let (mn, ij, ab) = label((a * k + b) * k + c);
                    return Err(Error::Axiom {
                        axiom: "iv",
                        detail: format!("A{mn:?} A{ij:?} and A{ij:?} A{mn:?} differ at {ab:?}"),
                    });
                }
            }
        }
    }
    Ok(tensor)
}
