//! The non-binary Johnson scheme `J_r(n, m)`, its embedding into an
//! attenuated-space scheme when `r = q^l + 1`, and the `q -> 1` limit.
//!
//! Relation labels follow the attenuated side: `R_ij` has `c = m - i` common
//! support positions and `e = m - i - j` agreeing letters, so `i <= n - m` and
//! `i + j <= m`. Eigenvalue indices are transposed: `T~_ij(0, 0)` is the
//! valency of `R_ji`, matching `T~_ij(x, y) = lim T_ji(y, x)`.

mod embed;
mod limit;
mod scheme;

use serde::{Deserialize, Serialize};

use crate::attenuated::{Domain, Index2};
use crate::error::{Error, Result};
use crate::exactnum::{binomial, hyp_3f2, int, pochhammer, ExactScalar};

pub use embed::{embedding_phi, EmbeddingReport, EmbeddingViolation};
pub use limit::{limit_check, LimitConfig, LimitEntry, LimitKind, LimitReport};
pub use scheme::{enumerate_johnson, JohnsonScheme};

/// Largest `J_r(n, m)` that [`enumerate_johnson`] will build.
pub const MAX_JOHNSON_VERTICES: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JohnsonParams {
    pub r: i64,
    pub n: i64,
    pub m: i64,
}

impl JohnsonParams {
    pub fn new(r: i64, n: i64, m: i64) -> Result<Self> {
        let p = JohnsonParams { r, n, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r <= 2 {
            return Err(Error::InvalidParameter(format!("alphabet size r must exceed 2, got {}", self.r)));
        }
        if self.m < 0 || self.m > self.n {
            return Err(Error::InvalidParameter(format!("need 0 <= m <= n, got n={} m={}", self.n, self.m)));
        }
        Ok(())
    }

    /// `C(n, m) (r-1)^m`.
    pub fn cardinality(&self) -> ExactScalar {
        binomial(self.n, self.m) * int(self.r - 1).pow(self.m as i32)
    }

    /// Relation labels `(i, j)`: `i <= n - m`, `i + j <= m`, deg-lex.
    pub fn relation_domain(&self) -> Domain {
        Domain::new(self.n, self.m, self.m)
    }

    /// Index pairs of `T~` and `U~`, the transpose of [`Self::relation_domain`].
    pub fn eigen_domain(&self) -> Vec<Index2> {
        self.relation_domain().points().iter().map(|&(a, b)| (b, a)).collect()
    }

    fn require(&self, p: Index2) -> Result<()> {
        if self.relation_domain().contains((p.1, p.0)) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(p.0, p.1))
        }
    }
}

impl std::fmt::Display for JohnsonParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "J_{}({}, {})", self.r, self.n, self.m)
    }
}

fn terminating(r: Result<ExactScalar>) -> ExactScalar {
    r.expect("in-range parameters give a regular terminating series")
}

/// `K~_i(N, r-1, x) = C(N, i) (r-2)^i 2F1(-i, -x; -N; (r-1)/(r-2))`, summed
/// with the `(r-2)^i` pushed inside so that `r = 2` is allowed.
pub fn krawtchouk_tilde(i: i64, big_n: i64, r: i64, x: i64) -> ExactScalar {
    if i < 0 || i > big_n || x < 0 || x > big_n {
        return ExactScalar::from_integer(0.into());
    }
    let mut sum = int(0);
    for k in 0..=i.min(x) {
        let num = terminating(pochhammer(&int(-i), k)) * terminating(pochhammer(&int(-x), k));
        let den = terminating(pochhammer(&int(-big_n), k)) * terminating(pochhammer(&int(1), k));
        sum += num / den * int(r - 1).pow(k as i32) * int(r - 2).pow((i - k) as i32);
    }
    binomial(big_n, i) * sum
}

/// Dual Hahn `R_k(lambda(x); gamma, delta, N)` as a terminating `3F2` at 1.
pub fn dual_hahn(k: i64, x: i64, gamma: i64, delta: i64, big_n: i64) -> Result<ExactScalar> {
    hyp_3f2([&int(-k), &int(-x), &int(x + gamma + delta + 1)], [&int(gamma + 1), &int(-big_n)], &int(1))
}

/// `E~_j(n-x, m-x, y) = C(m-x, j) C(n-m, j) R_j(lambda(y); -m+x-1, -n+m-1, n-m)`.
pub fn eberlein_tilde(j: i64, n: i64, m: i64, x: i64, y: i64) -> ExactScalar {
    if j < 0 || j > (m - x).min(n - m) || y < 0 {
        return int(0);
    }
    binomial(m - x, j) * binomial(n - m, j) * terminating(dual_hahn(j, y, -m + x - 1, -n + m - 1, n - m))
}

/// `Q~_j(n-i, m-i, y) = (C(n-i, j) - C(n-i, j-1)) R_y(lambda(j); -m+i-1, -n+m-1, n-m)`.
pub fn hahn_tilde(j: i64, n: i64, m: i64, i: i64, y: i64) -> ExactScalar {
    if j < 0 || j > (m - i).min(n - m) || y < 0 {
        return int(0);
    }
    (binomial(n - i, j) - binomial(n - i, j - 1)) * terminating(dual_hahn(y, j, -m + i - 1, -n + m - 1, n - m))
}

/// `T~_ij(x, y)` for any alphabet size `r >= 2`.
pub fn t_tilde(r: i64, n: i64, m: i64, i: i64, j: i64, x: i64, y: i64) -> ExactScalar {
    if j + x > m {
        return int(0);
    }
    int(r - 1).pow(j as i32) * krawtchouk_tilde(i, m - j, r, x) * eberlein_tilde(j, n, m, x, y)
}

/// `U~_ij(x, y)` for any alphabet size `r >= 2`.
pub fn u_tilde(r: i64, n: i64, m: i64, i: i64, j: i64, x: i64, y: i64) -> ExactScalar {
    binomial(n, i) / binomial(m, i) * krawtchouk_tilde(i, m - y, r, x) * hahn_tilde(j, n, m, i, y)
}

/// `(T~_ij(x, y), U~_ij(x, y))`.
pub fn johnson_eigens(params: &JohnsonParams, i: i64, j: i64, x: i64, y: i64) -> Result<(ExactScalar, ExactScalar)> {
    params.validate()?;
    params.require((i, j))?;
    params.require((x, y))?;
    let JohnsonParams { r, n, m } = *params;
    Ok((t_tilde(r, n, m, i, j, x, y), u_tilde(r, n, m, i, j, x, y)))
}

/// Eigenvalues of the binary Johnson scheme `J(n, m)` by the Eberlein sum
/// `sum_h (-1)^h C(y, h) C(m-y, k-h) C(n-m-y, k-h)`.
pub fn binary_johnson_eigenvalue(n: i64, m: i64, k: i64, y: i64) -> ExactScalar {
    (0..=k)
        .map(|h| {
            let s = if h % 2 == 0 { int(1) } else { int(-1) };
            s * binomial(y, h) * binomial(m - y, k - h) * binomial(n - m - y, k - h)
        })
        .sum()
}

/// Residuals of the `r = 2` specialization against [`binary_johnson_eigenvalue`]:
/// `T~_0j(0, y)` must be the Eberlein value and `T~_ij(0, 0)` must vanish for `i > 0`.
pub fn binary_specialization(n: i64, m: i64) -> Vec<(Index2, Index2, ExactScalar)> {
    let dom: Vec<Index2> = Domain::new(n, m, m).points().iter().map(|&(a, b)| (b, a)).collect();
    let mut out = Vec::new();
    for &(i, j) in &dom {
        for &(x, y) in &dom {
            let t = t_tilde(2, n, m, i, j, x, y);
            let want = if i > 0 {
                if x > 0 {
                    continue;
                }
                int(0)
            } else if x > 0 {
                continue;
            } else {
                binary_johnson_eigenvalue(n, m, j, y)
            };
            out.push(((i, j), (x, y), t - want));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    // Krawtchouk of the Hamming scheme H(N, r-1): sum_k (-1)^k (r-2)^{i-k} C(x, k) C(N-x, i-k)
    fn hamming_krawtchouk(i: i64, big_n: i64, r: i64, x: i64) -> ExactScalar {
        (0..=i)
            .map(|k| {
                let s = if k % 2 == 0 { int(1) } else { int(-1) };
                s * int(r - 2).pow((i - k) as i32) * binomial(x, k) * binomial(big_n - x, i - k)
            })
            .sum()
    }

    #[test]
    fn krawtchouk_matches_hamming() {
        for r in 2..6 {
            for big_n in 0..6 {
                for i in 0..=big_n {
                    for x in 0..=big_n {
                        assert_eq!(krawtchouk_tilde(i, big_n, r, x), hamming_krawtchouk(i, big_n, r, x), "r={r} N={big_n} i={i} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_values() {
        let p = JohnsonParams::new(3, 3, 2).unwrap();
        for &xy in &p.eigen_domain() {
            let (t, u) = johnson_eigens(&p, 0, 0, xy.0, xy.1).unwrap();
            assert_eq!(t, int(1));
            let (t0, u0) = johnson_eigens(&p, xy.0, xy.1, 0, 0).unwrap();
            assert!(!t0.is_zero());
            let _ = (u, u0);
        }
        let (_, u) = johnson_eigens(&p, 0, 0, 0, 0).unwrap();
        assert_eq!(u, int(1));
        assert!(johnson_eigens(&p, 2, 1, 0, 0).is_err());
        assert!(JohnsonParams::new(2, 3, 2).is_err());
    }

    #[test]
    fn binary_eberlein_four_two() {
        // J(4, 2) is the octahedron: distance-1 eigenvalues 4, 0, -2
        let e: Vec<_> = (0..3).map(|y| binary_johnson_eigenvalue(4, 2, 1, y)).collect();
        assert_eq!(e, vec![int(4), int(0), int(-2)]);
        let res = binary_specialization(4, 2);
        assert!(!res.is_empty());
        for (ij, xy, d) in res {
            assert!(d.is_zero(), "{ij:?} {xy:?}");
        }
    }

    #[test]
    fn dual_eigenvalues_satisfy_duality() {
        for (r, n, m) in [(3, 3, 2), (4, 5, 2), (5, 6, 3)] {
            let p = JohnsonParams::new(r, n, m).unwrap();
            let dom = p.eigen_domain();
            let mult: ExactScalar = dom.iter().map(|&(x, y)| u_tilde(r, n, m, x, y, 0, 0)).sum();
            assert_eq!(mult, p.cardinality());
            for &(i, j) in &dom {
                for &(x, y) in &dom {
                    let lhs = t_tilde(r, n, m, i, j, x, y) * u_tilde(r, n, m, x, y, 0, 0);
                    let rhs = u_tilde(r, n, m, x, y, i, j) * t_tilde(r, n, m, i, j, 0, 0);
                    assert_eq!(lhs, rhs, "r={r} n={n} m={m} {i}{j} {x}{y}");
                }
            }
        }
    }

    #[test]
    fn cardinality_and_domain() {
        let p = JohnsonParams::new(3, 3, 2).unwrap();
        assert_eq!(p.cardinality(), int(12));
        assert_eq!(p.relation_domain().points(), &[(0, 0), (0, 1), (1, 0), (0, 2), (1, 1)]);
        assert_eq!(p.eigen_domain(), vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]);
    }
}
