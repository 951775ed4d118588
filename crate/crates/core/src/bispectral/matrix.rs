use std::ops::{Add, Mul, Sub};

use num_traits::{Signed, Zero};

use crate::exactnum::{fmt_exact, int, ExactScalar};

/// Small dense square matrix of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMatrix {
    n: usize,
    a: Vec<ExactScalar>,
}

impl RatMatrix {
    pub fn zeros(n: usize) -> Self {
        RatMatrix { n, a: vec![ExactScalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.a[k * n + k] = int(1);
        }
        m
    }

    pub fn diagonal(d: Vec<ExactScalar>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (k, v) in d.into_iter().enumerate() {
            m.a[k * n + k] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.a[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.a[r * self.n + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &ExactScalar) {
        self.a[r * self.n + c] += v;
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        RatMatrix { n: self.n, a: self.a.iter().map(|v| v * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Entry of largest magnitude, with its position.
    pub fn max_entry(&self) -> Option<(usize, usize, ExactScalar)> {
        let (k, v) = self.a.iter().enumerate().filter(|(_, v)| !v.is_zero()).max_by(|x, y| x.1.abs().cmp(&y.1.abs()))?;
        Some((k / self.n, k % self.n, v.clone()))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        &(self * o) + &(o * self)
    }

    pub fn nonzero_positions(&self) -> Vec<(usize, usize)> {
        (0..self.n * self.n).filter(|&k| !self.a[k].is_zero()).map(|k| (k / self.n, k % self.n)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.n).map(|r| (0..self.n).map(|c| fmt_exact(self.get(r, c))).collect()).collect();
        serde_json::json!(rows)
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, o: &RatMatrix) -> RatMatrix {
        RatMatrix { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, o: &RatMatrix) -> RatMatrix {
        RatMatrix { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect() }
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, o: &RatMatrix) -> RatMatrix {
        let n = self.n;
        let mut out = RatMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let f = &self.a[r * n + k];
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let g = &o.a[k * n + c];
                    if !g.is_zero() {
                        out.a[r * n + c] += f * g;
                    }
                }
            }
        }
        out
    }
}

macro_rules! owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RatMatrix {
            type Output = RatMatrix;
            fn $f(self, o: RatMatrix) -> RatMatrix {
                (&self).$f(&o)
            }
        }
    )*};
}
owned!(Add add, Sub sub, Mul mul);
