//! The map `varphi(x) = span{ f_i + phi(x_i) : x_i != 0 }` from `J_{q^l+1}(n, m)`
//! into the attenuated scheme on `F_q^{n+l}`.

use serde_json::{json, Value};

use super::scheme::{enumerate_johnson, JohnsonScheme};
use super::JohnsonParams;
use crate::attenuated::{Index2, SchemeInstance, SubspaceBasis};
use crate::error::{Error, Result};

const VIOLATION_CAP: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingViolation {
    pub x: usize,
    pub y: usize,
    pub johnson: Index2,
    pub attenuated: Index2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingReport {
    pub johnson: JohnsonParams,
    /// Attenuated vertex index of each word.
    pub images: Vec<usize>,
    pub injective: bool,
    pub pairs_checked: usize,
    pub violations: Vec<EmbeddingViolation>,
    pub violation_count: usize,
    /// Violations where the first label coordinate also differs.
    pub first_coordinate_violations: usize,
}

impl EmbeddingReport {
    pub fn passes(&self) -> bool {
        self.injective && self.violation_count == 0
    }

    pub fn to_json(&self) -> Value {
        let mut distinct = self.images.clone();
        distinct.sort_unstable();
        distinct.dedup();
        json!({
            "johnson": {"r": self.johnson.r, "n": self.johnson.n, "m": self.johnson.m},
            "images": self.images.len(),
            "distinct_images": distinct.len(),
            "injective": self.injective,
            "pairs_checked": self.pairs_checked,
            "violation_count": self.violation_count,
            "first_coordinate_violations": self.first_coordinate_violations,
            "violations": self.violations.iter().map(|v| json!({
                "x": v.x, "y": v.y,
                "johnson": [v.johnson.0, v.johnson.1],
                "attenuated": [v.attenuated.0, v.attenuated.1],
            })).collect::<Vec<_>>(),
            "passes": self.passes(),
        })
    }
}

/// `phi(k)`: the `k`-th vector of `w` (1-based) in lexicographic order of the
/// trailing `l` coordinates, so `phi(1) = 0`.
fn phi(k: usize, q: usize, n: usize, l: usize) -> Vec<u8> {
    let mut v = vec![0u8; n + l];
    let mut idx = k - 1;
    for c in (0..l).rev() {
        v[n + c] = (idx % q) as u8;
        idx /= q;
    }
    v
}

fn image(inst: &SchemeInstance, word: &[u8]) -> Result<usize> {
    let p = inst.params();
    let (n, l, q) = (p.n as usize, p.l as usize, p.q as usize);
    let rows: Vec<Vec<u8>> = word
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| {
            let mut v = phi(a as usize, q, n, l);
            v[i] = 1;
            v
        })
        .collect();
    let b = SubspaceBasis::from_rows(inst.field(), rows, n + l)?;
    inst.index_of(&b).ok_or_else(|| Error::Invariant(format!("image of {word:?} is not a vertex")))
}

/// Checks injectivity and relation preservation on every pair, for `r = q^l + 1`.
///
/// A pair in `R_ij` lands in `R_ij'` where `j'` is the rank of the letter
/// differences `phi(x_k) - phi(y_k)` over the common support, so the label is
/// preserved exactly when those differences are independent in `w`.
pub fn embedding_phi(inst: &SchemeInstance) -> Result<EmbeddingReport> {
    let p = *inst.params();
    let r = (p.q as i64).checked_pow(p.l as u32).map(|v| v + 1).ok_or_else(|| Error::TooLarge("q^l".into()))?;
    let jp = JohnsonParams::new(r, p.n, p.m)?;
    let js = enumerate_johnson(&jp)?;
    embedding_with(inst, &js)
}

fn embedding_with(inst: &SchemeInstance, js: &JohnsonScheme) -> Result<EmbeddingReport> {
    let p = inst.params();
    let jp = *js.params();
    if (p.q as i64).pow(p.l as u32) + 1 != jp.r || p.n != jp.n || p.m != jp.m {
        return Err(Error::InvalidParameter(format!("{jp} does not match {p} with r = q^l + 1")));
    }
    let images = js.words().iter().map(|w| image(inst, w)).collect::<Result<Vec<_>>>()?;
    let mut sorted = images.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let injective = sorted.len() == images.len();
    let nv = images.len();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut first_coordinate_violations = 0;
    for x in 0..nv {
        for y in 0..nv {
            let a = js.relation_label(x, y);
            let b = inst.relation_label(images[x], images[y]);
            if a != b {
                violation_count += 1;
                if a.0 != b.0 {
                    first_coordinate_violations += 1;
                }
                if violations.len() < VIOLATION_CAP {
                    violations.push(EmbeddingViolation { x, y, johnson: a, attenuated: b });
                }
            }
        }
    }
    Ok(EmbeddingReport {
        johnson: jp,
        images,
        injective,
        pairs_checked: nv * nv,
        violations,
        violation_count,
        first_coordinate_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attenuated::SchemeParams;

    // rank over F_q (q prime) of the trailing-coordinate differences, by elimination
    fn difference_rank(q: u8, rows: Vec<Vec<u8>>) -> i64 {
        let mut rows = rows;
        let width = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..width {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
            rows.swap(rank, p);
            let inv = (1..q).find(|&v| (v as u32 * rows[rank][c] as u32) % q as u32 == 1).unwrap();
            for r in 0..rows.len() {
                if r != rank && rows[r][c] != 0 {
                    let f = (rows[r][c] as u32 * inv as u32) % q as u32;
                    for k in 0..width {
                        let v = (rows[r][k] as u32 + (q as u32 - f) * rows[rank][k] as u32 % q as u32) % q as u32;
                        rows[r][k] = v as u8;
                    }
                }
            }
            rank += 1;
        }
        rank as i64
    }

    #[test]
    fn small_embeddings() {
        for (l, images) in [(1usize, 12), (2, 48)] {
            let p = SchemeParams::new(2, 3, l as i64, 2).unwrap();
            let inst = SchemeInstance::construct(&p).unwrap();
            let js = enumerate_johnson(&JohnsonParams::new((1 << l) + 1, 3, 2).unwrap()).unwrap();
            let rep = embedding_phi(&inst).unwrap();
            assert_eq!(rep.images.len(), images);
            assert!(rep.injective);
            assert_eq!(rep.pairs_checked, images * images);
            assert_eq!(rep.first_coordinate_violations, 0);
            // words (1,1,0) and (2,2,0) share f_1 - f_2 after the map
            assert!(!rep.passes());
            for x in 0..images {
                for y in 0..images {
                    let (wx, wy) = (js.word(x), js.word(y));
                    let diffs: Vec<Vec<u8>> = wx
                        .iter()
                        .zip(wy)
                        .filter(|(a, b)| **a != 0 && **b != 0 && a != b)
                        .map(|(&a, &b)| {
                            let (u, v) = (phi(a as usize, 2, 3, l), phi(b as usize, 2, 3, l));
                            u.iter().zip(&v).map(|(s, t)| s ^ t).collect()
                        })
                        .collect();
                    let (i, _) = js.relation_label(x, y);
                    let want = (i, difference_rank(2, diffs));
                    assert_eq!(inst.relation_label(rep.images[x], rep.images[y]), want, "{wx:?} {wy:?}");
                }
            }
        }
    }

    #[test]
    fn dependent_differences_break_the_label() {
        let inst = SchemeInstance::construct(&SchemeParams::new(2, 3, 1, 2).unwrap()).unwrap();
        let rep = embedding_phi(&inst).unwrap();
        let v = rep.violations.iter().find(|v| v.x == 0 && v.y == 3).unwrap();
        assert_eq!((v.johnson, v.attenuated), ((0, 2), (0, 1)));
        assert_eq!(rep.violation_count, 12);
    }

    #[test]
    fn phi_is_lexicographic() {
        assert_eq!(phi(1, 2, 1, 2), vec![0, 0, 0]);
        assert_eq!(phi(2, 2, 1, 2), vec![0, 0, 1]);
        assert_eq!(phi(3, 2, 1, 2), vec![0, 1, 0]);
    }

    #[test]
    fn mismatched_alphabet_rejected() {
        let inst = SchemeInstance::construct(&SchemeParams::new(2, 3, 1, 2).unwrap()).unwrap();
        let js = enumerate_johnson(&JohnsonParams::new(4, 3, 2).unwrap()).unwrap();
        assert!(embedding_with(&inst, &js).is_err());
    }
}
