//! Classical (q = 1) analogues, used by the Johnson scheme side.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{int, ExactScalar};
use crate::error::{Error, Result};

const MAX_TERMS: i64 = 4096;

pub fn pochhammer(a: &ExactScalar, n: i64) -> Result<ExactScalar> {
    if n < 0 {
        return Err(Error::UndefinedOrder(n));
    }
    let mut acc = ExactScalar::one();
    for k in 0..n {
        acc *= a + int(k);
    }
    Ok(acc)
}

/// Ordinary binomial; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> ExactScalar {
    if k < 0 || k > n {
        return ExactScalar::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    ExactScalar::from_integer(acc)
}

fn nonpositive_integer(a: &ExactScalar) -> Option<i64> {
    if a.is_integer() && !a.is_positive() {
        a.to_integer().abs().to_i64()
    } else {
        None
    }
}

/// Terminating `pFq`: some upper parameter must be a non-positive integer.
pub fn hyp_pfq(upper: &[ExactScalar], lower: &[ExactScalar], z: &ExactScalar) -> Result<ExactScalar> {
    let last = upper
        .iter()
        .filter_map(nonpositive_integer)
        .min()
        .filter(|&n| n <= MAX_TERMS)
        .ok_or(Error::NonTerminating)?;
    let mut term = ExactScalar::one();
    let mut sum = ExactScalar::one();
    for k in 0..last {
        let mut den = int(k + 1);
        for b in lower {
            den *= b + int(k);
        }
        if den.is_zero() {
            return Err(Error::SingularParameter(k as usize + 1));
        }
        let mut num = z.clone();
        for a in upper {
            num *= a + int(k);
        }
        term = term * num / den;
        sum += &term;
    }
    Ok(sum)
}

pub fn hyp_2f1(a: &ExactScalar, b: &ExactScalar, c: &ExactScalar, z: &ExactScalar) -> Result<ExactScalar> {
    hyp_pfq(&[a.clone(), b.clone()], &[c.clone()], z)
}

pub fn hyp_3f2(
    a: [&ExactScalar; 3],
    b: [&ExactScalar; 2],
    z: &ExactScalar,
) -> Result<ExactScalar> {
    hyp_pfq(
        &a.map(|x| x.clone()),
        &b.map(|x| x.clone()),
        z,
    )
}
