//! Dense `i128` matrices combined with sparse 01 adjacency and diagonals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::attenuated::Adjacency;
use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::par::map_range;

// Entries are kept below this bound so a product with a row of at most
// 2^20 nonzeros stays inside i128.
const BOUND: u128 = 1 << 100;

#[derive(Clone, Debug, PartialEq)]
pub struct IntMatrix {
    pub n: usize,
    pub a: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1; n])
    }

    pub fn diagonal(d: &[i128]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (k, &v) in d.iter().enumerate() {
            m.a[k * n + k] = v;
        }
        m
    }

    pub fn from_adjacency(adj: &Adjacency, n: usize) -> Self {
        let mut m = Self::zeros(n);
        for y in 0..n {
            for &z in adj.row(y) {
                m.a[y * n + z as usize] = 1;
            }
        }
        m
    }

    pub fn row(&self, y: usize) -> &[i128] {
        &self.a[y * self.n..(y + 1) * self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&v| v == 0)
    }

    pub fn max_abs(&self) -> u128 {
        self.a.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// Largest entry with its position.
    pub fn worst(&self) -> Option<(usize, usize, i128)> {
        let (k, &v) = self.a.iter().enumerate().max_by_key(|(_, v)| v.unsigned_abs())?;
        (v != 0).then_some((k / self.n, k % self.n, v))
    }

    fn guard(&self) -> Result<()> {
        if self.max_abs() >= BOUND {
            return Err(Error::TooLarge("integer matrix entries exceed 2^100".into()));
        }
        Ok(())
    }

    fn rows(n: usize, f: impl Fn(usize) -> Vec<i128> + Sync + Send) -> Self {
        IntMatrix { n, a: map_range(n, f).concat() }
    }

    /// `A M` for a 01 matrix `A`.
    pub fn adj_left(adj: &Adjacency, m: &IntMatrix) -> Result<Self> {
        m.guard()?;
        let n = m.n;
        Ok(Self::rows(n, |y| {
            let mut out = vec![0i128; n];
            for &z in adj.row(y) {
                for (o, v) in out.iter_mut().zip(m.row(z as usize)) {
                    *o += v;
                }
            }
            out
        }))
    }

    /// `M A` for a 01 matrix `A`.
    pub fn adj_right(m: &IntMatrix, adj: &Adjacency) -> Result<Self> {
        m.guard()?;
        let n = m.n;
        Ok(Self::rows(n, |y| {
            let mut out = vec![0i128; n];
            for (z, &v) in m.row(y).iter().enumerate() {
                if v != 0 {
                    for &w in adj.row(z) {
                        out[w as usize] += v;
                    }
                }
            }
            out
        }))
    }

    /// `diag(d) M`.
    pub fn diag_left(d: &[i128], m: &IntMatrix) -> Result<Self> {
        let n = m.n;
        let mut out = m.clone();
        for y in 0..n {
            for v in &mut out.a[y * n..(y + 1) * n] {
                *v = v.checked_mul(d[y]).ok_or_else(overflow)?;
            }
        }
        out.guard()?;
        Ok(out)
    }

    /// `M diag(d)`.
    pub fn diag_right(m: &IntMatrix, d: &[i128]) -> Result<Self> {
        let n = m.n;
        let mut out = m.clone();
        for y in 0..n {
            for (z, v) in out.a[y * n..(y + 1) * n].iter_mut().enumerate() {
                *v = v.checked_mul(d[z]).ok_or_else(overflow)?;
            }
        }
        out.guard()?;
        Ok(out)
    }

    pub fn add_scaled(&mut self, o: &IntMatrix, c: i128) -> Result<()> {
        for (x, &y) in self.a.iter_mut().zip(&o.a) {
            *x = y.checked_mul(c).and_then(|t| x.checked_add(t)).ok_or_else(overflow)?;
        }
        Ok(())
    }

    /// `[A, M]` for a 01 matrix `A`.
    pub fn commutator_adj(adj: &Adjacency, m: &IntMatrix) -> Result<Self> {
        let mut l = Self::adj_left(adj, m)?;
        l.add_scaled(&Self::adj_right(m, adj)?, -1)?;
        Ok(l)
    }

    /// `[diag(d), M]`.
    pub fn commutator_diag(d: &[i128], m: &IntMatrix) -> Result<Self> {
        let n = m.n;
        let mut out = m.clone();
        for y in 0..n {
            for (z, v) in out.a[y * n..(y + 1) * n].iter_mut().enumerate() {
                *v = v.checked_mul(d[y] - d[z]).ok_or_else(overflow)?;
            }
        }
        Ok(out)
    }
}

fn overflow() -> Error {
    Error::TooLarge("integer matrix arithmetic overflow".into())
}

/// Integer vector `L v` with `L` the least common denominator of `v`.
pub fn clear_denominators(v: &[ExactScalar]) -> Result<(Vec<i128>, BigInt)> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let out = v
        .iter()
        .map(|x| (x.numer() * (&l / x.denom())).to_i128().ok_or_else(overflow))
        .collect::<Result<_>>()?;
    Ok((out, l))
}

/// Sum of rational multiples of integer matrices, scaled to integers by the
/// common denominator of the coefficients (a nonzero overall factor).
pub fn integer_combination(terms: &[(ExactScalar, IntMatrix)]) -> Result<IntMatrix> {
    let n = terms.first().map_or(0, |t| t.1.n);
    let l = terms.iter().fold(BigInt::one(), |acc, (c, _)| acc.lcm(c.denom()));
    let mut out = IntMatrix::zeros(n);
    for (c, m) in terms {
        if c.is_zero() {
            continue;
        }
        let k = (c.numer() * (&l / c.denom())).to_i128().ok_or_else(overflow)?;
        if k.unsigned_abs() >= BOUND {
            return Err(overflow());
        }
        out.add_scaled(m, k)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;

    #[test]
    fn denominators() {
        let (v, l) = clear_denominators(&[ratio(1, 2), ratio(-2, 3), ratio(5, 1)]).unwrap();
        assert_eq!(l, BigInt::from(6));
        assert_eq!(v, vec![3, -4, 30]);
    }

    #[test]
    fn combination() {
        let i = IntMatrix::identity(2);
        let d = IntMatrix::diagonal(&[1, 2]);
        let m = integer_combination(&[(ratio(1, 2), i), (ratio(1, 3), d)]).unwrap();
        assert_eq!(m.a, vec![5, 0, 0, 7]);
        assert_eq!(m.worst(), Some((1, 1, 7)));
        assert_eq!(IntMatrix::commutator_diag(&[1, 2], &IntMatrix { n: 2, a: vec![0, 1, 1, 0] }).unwrap().a, vec![0, -1, 1, 0]);
    }
}
