//! Small finite fields as lookup tables.
//!
//! An element of `F_{p^h}` is the coefficient vector `c_0 + c_1 x + ...` of a
//! polynomial reduced modulo a fixed irreducible, packed as the integer
//! `sum c_k p^k`. Tables are at most 27 x 27.

use crate::error::{Error, Result};

/// Supported orders with their prime, degree and monic modulus (low to high, leading 1 omitted).
const TABLE: &[(u64, u64, u32, &[u8])] = &[
    (2, 2, 1, &[]),
    (3, 3, 1, &[]),
    (4, 2, 2, &[1, 1]),
    (5, 5, 1, &[]),
    (7, 7, 1, &[]),
    (8, 2, 3, &[1, 1, 0]),
    (9, 3, 2, &[2, 2]),
    (16, 2, 4, &[1, 1, 0, 0]),
    (25, 5, 2, &[2, 4]),
    (27, 3, 3, &[1, 2, 0]),
];

pub const SUPPORTED_ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    p: u64,
    h: u32,
    /// Monic modulus coefficients, constant term first, including the leading 1.
    modulus: Vec<u8>,
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

fn digits(mut a: usize, p: usize, h: usize) -> Vec<usize> {
    let mut d = vec![0; h];
    for x in d.iter_mut() {
        *x = a % p;
        a /= p;
    }
    d
}

fn pack(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FieldContext {
    pub fn new(q: u64) -> Result<Self> {
        let &(_, p, h, low) = TABLE.iter().find(|t| t.0 == q).ok_or(Error::FieldNotInTable(q))?;
        let (pu, hu, qu) = (p as usize, h as usize, q as usize);
        let mut modulus: Vec<u8> = if h == 1 { vec![0] } else { low.to_vec() };
        modulus.push(1);
        let mut add = vec![0u8; qu * qu];
        let mut mul = vec![0u8; qu * qu];
        for a in 0..qu {
            let da = digits(a, pu, hu);
            for b in 0..qu {
                let db = digits(b, pu, hu);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % pu).collect();
                add[a * qu + b] = pack(&s, pu) as u8;
                let mut prod = vec![0usize; 2 * hu];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % pu;
                    }
                }
                for k in (hu..2 * hu).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for t in 0..hu {
                        let sub = c * modulus[t] as usize % pu;
                        prod[k - hu + t] = (prod[k - hu + t] + pu - sub) % pu;
                    }
                }
                mul[a * qu + b] = pack(&prod[..hu], pu) as u8;
            }
        }
        let neg = (0..qu)
            .map(|a| (0..qu).find(|&b| add[a * qu + b] == 0).unwrap() as u8)
            .collect();
        let mut inv = vec![0u8; qu];
        for a in 1..qu {
            inv[a] = (1..qu)
                .find(|&b| mul[a * qu + b] == 1)
                .ok_or_else(|| Error::Invariant(format!("{a} has no inverse in F_{q}")))?
                as u8;
        }
        Ok(FieldContext { p, h, modulus, q: qu, add, mul, neg, inv })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    /// Reduces `rows` (each of equal length) to RREF in place and returns the pivot columns.
    pub fn rref(&self, rows: &mut [Vec<u8>]) -> Vec<usize> {
        let width = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..width {
            if top == rows.len() {
                break;
            }
            let Some(pr) = (top..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(top, pr);
            let s = self.inv(rows[top][col]);
            for x in rows[top].iter_mut() {
                *x = self.mul(*x, s);
            }
            for r in 0..rows.len() {
                if r != top && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in col..width {
                        let t = self.mul(f, rows[top][c]);
                        rows[r][c] = self.sub(rows[r][c], t);
                    }
                }
            }
            pivots.push(col);
            top += 1;
        }
        pivots
    }

    /// Forward elimination on a flat row-major `rows x width` buffer.
    /// Returns `(rank of the first split columns, total rank)`.
    pub fn split_rank(&self, buf: &mut [u8], rows: usize, width: usize, split: usize) -> (usize, usize) {
        let mut top = 0;
        let mut left = 0;
        for col in 0..width {
            if top == rows {
                break;
            }
            let Some(pr) = (top..rows).find(|&r| buf[r * width + col] != 0) else {
                continue;
            };
            if pr != top {
                for c in col..width {
                    buf.swap(top * width + c, pr * width + c);
                }
            }
            let s = self.inv(buf[top * width + col]);
            for r in top + 1..rows {
                let f = buf[r * width + col];
                if f == 0 {
                    continue;
                }
                let f = self.mul(f, s);
                for c in col..width {
                    let t = self.mul(f, buf[top * width + c]);
                    buf[r * width + c] = self.sub(buf[r * width + c], t);
                }
            }
            top += 1;
            if col < split {
                left = top;
            }
        }
        (left, top)
    }
}
