use num_bigint::BigInt;
use num_traits::Zero;

use crate::par::map_range;

/// Rank by fraction-free (Bareiss) elimination.
pub fn exact_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for k in c..cols {
                let v = (&piv * &row[k] - &f * &pivot_row[k]) / &prev;
                row[k] = v;
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Dense square product of flat row-major `i128` matrices.
pub(crate) fn matmul(a: &[i128], b: &[i128], n: usize) -> Vec<i128> {
    let rows = map_range(n, |x| {
        let mut out = vec![0i128; n];
        for z in 0..n {
            let f = a[x * n + z];
            if f == 0 {
                continue;
            }
            let br = &b[z * n..(z + 1) * n];
            for (o, &v) in out.iter_mut().zip(br) {
                *o += f * v;
            }
        }
        out
    });
    rows.concat()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(exact_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(exact_rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(exact_rank(m(&[&[0, 1, 2], &[1, 0, 3], &[1, 1, 5]])), 2);
        assert_eq!(exact_rank(m(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]])), 3);
    }

    #[test]
    fn product() {
        let a = [1, 2, 3, 4];
        let b = [0, 1, 1, 0];
        assert_eq!(matmul(&a, &b, 2), vec![2, 1, 4, 3]);
    }
}
