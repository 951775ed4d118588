use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::attenuated::{BruteTensor, Domain, Index2};
use crate::exactnum::{fmt_exact, int, ExactScalar};
use crate::spectra::KreinTensor;

/// Sparse `(key, (i,j), (a,b)) -> value`; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterTensor {
    domain: Domain,
    keys: Vec<Index2>,
    entries: BTreeMap<(Index2, Index2, Index2), ExactScalar>,
}

impl ParameterTensor {
    pub fn new(domain: Domain, keys: Vec<Index2>) -> Self {
        ParameterTensor { domain, keys, entries: BTreeMap::new() }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn keys(&self) -> &[Index2] {
        &self.keys
    }

    pub fn get(&self, key: Index2, ij: Index2, ab: Index2) -> ExactScalar {
        self.entries.get(&(key, ij, ab)).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn set(&mut self, key: Index2, ij: Index2, ab: Index2, v: ExactScalar) {
        if v.is_zero() {
            self.entries.remove(&(key, ij, ab));
        } else {
            self.entries.insert((key, ij, ab), v);
        }
    }

    /// Nonzero entries in key, row, target order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&(Index2, Index2, Index2), &ExactScalar)> {
        self.entries.iter()
    }

    /// Slices of a brute-force intersection tensor.
    pub fn from_brute(t: &BruteTensor, domain: &Domain, keys: &[Index2]) -> Self {
        let mut out = Self::new(domain.clone(), keys.to_vec());
        for &k in keys {
            for &ij in domain.points() {
                for &ab in domain.points() {
                    if let Some(v) = t.get(k, ij, ab) {
                        out.set(k, ij, ab, int(v as i64));
                    }
                }
            }
        }
        out
    }

    pub fn from_krein(t: &KreinTensor, domain: &Domain, keys: &[Index2]) -> Self {
        let mut out = Self::new(domain.clone(), keys.to_vec());
        for &k in keys {
            for &rs in domain.points() {
                for &ab in domain.points() {
                    if let Some(v) = t.get(k, rs, ab) {
                        out.set(k, rs, ab, v.clone());
                    }
                }
            }
        }
        out
    }

    /// Entries where the two tables disagree, over the keys of `self`.
    pub fn mismatches(&self, other: &Self) -> Vec<Mismatch> {
        let mut out = Vec::new();
        for &k in &self.keys {
            for &ij in self.domain.points() {
                for &ab in self.domain.points() {
                    let (a, b) = (self.get(k, ij, ab), other.get(k, ij, ab));
                    if a != b {
                        out.push(Mismatch { key: k, ij, ab, left: a, right: b });
                    }
                }
            }
        }
        out
    }

    /// `sum_ij t_{key,ij}^{ab}`; equals the valency of `key` for intersection numbers.
    pub fn column_sum(&self, key: Index2, ab: Index2) -> ExactScalar {
        self.domain.points().iter().map(|&ij| self.get(key, ij, ab)).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("key_i,key_j,i,j,a,b,value\n");
        for ((k, ij, ab), v) in &self.entries {
            s.push_str(&format!("{},{},{},{},{},{},{}\n", k.0, k.1, ij.0, ij.1, ab.0, ab.1, fmt_exact(v)));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let v: Vec<Value> = self
            .entries
            .iter()
            .map(|((k, ij, ab), v)| json!({"key": [k.0, k.1], "ij": [ij.0, ij.1], "ab": [ab.0, ab.1], "value": fmt_exact(v)}))
            .collect();
        json!(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub key: Index2,
    pub ij: Index2,
    pub ab: Index2,
    pub left: ExactScalar,
    pub right: ExactScalar,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "key {:?} at {:?} -> {:?}: {} vs {}",
            self.key,
            self.ij,
            self.ab,
            fmt_exact(&self.left),
            fmt_exact(&self.right)
        )
    }
}
