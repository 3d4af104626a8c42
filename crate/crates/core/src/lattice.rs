//! Small exact linear algebra over `Z` and `Q` for desk-sized matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(a: &[Vec<i64>]) -> IMat {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "shape mismatch in product");
            (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

fn to_q(a: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// Row-reduces in place and returns the pivot columns.
fn echelon(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<i64>]) -> usize {
    let mut m = to_q(a);
    echelon(&mut m).len()
}

/// Inverse of a square integer matrix over `Q`.
pub fn rational_inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = to_q(a);
    for (i, row) in m.iter_mut().enumerate() {
        assert_eq!(row.len(), n, "matrix is not square");
        for j in 0..n {
            row.push(if i == j { BigRational::one() } else { BigRational::zero() });
        }
    }
    let piv = echelon(&mut m);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b` over `Q` for square invertible `a`.
pub fn solve_rational(inv: &[Vec<BigRational>], b: &[i64]) -> Vec<BigRational> {
    inv.iter()
        .map(|row| {
            row.iter()
                .zip(b)
                .fold(BigRational::zero(), |acc, (p, &q)| acc + p * BigRational::from_integer(q.into()))
        })
        .collect()
}

/// Integer solution of a rational vector, if every entry is integral and fits `i64`.
pub fn integral(v: &[BigRational]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
        .collect()
}

/// For `b` of full column rank `r`, returns `(q, det)` with `q b = det I_r`, `det > 0`.
pub fn left_inverse(b: &[Vec<i64>]) -> Option<(IMat, i64)> {
    let n = b.len();
    let r = b.first().map_or(0, Vec::len);
    // rows of b are columns of b^T; pick independent ones
    let mut bt = to_q(&transpose(b));
    let rows = echelon(&mut bt);
    if rows.len() < r {
        return None;
    }
    let sub: IMat = rows.iter().map(|&i| b[i].clone()).collect();
    let inv = rational_inverse(&sub)?;
    let mut den = BigInt::one();
    for row in &inv {
        for x in row {
            den = den.lcm(x.denom());
        }
    }
    let det = den.to_i64()?;
    let mut q = vec![vec![0i64; n]; r];
    for (a, row) in inv.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            let scaled = x * BigRational::from_integer(den.clone());
            q[a][rows[c]] = scaled.to_integer().to_i64()?;
        }
    }
    Some((q, det))
}

/// One integer solution of `a x = b`, free variables set to zero, via a diagonal
/// (Smith-type) reduction `U a V = D`.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = a.to_vec();
    let mut b: Vec<BigInt> = b.to_vec();
    let mut v: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let swap_cols = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in v.iter_mut() {
            row.swap(x, y);
        }
    };

    let mut t = 0;
    while t < m.min(k) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..k {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        b.swap(t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = &a[i][t] / &a[t][t];
                for j in t..k {
                    let s = &a[t][j] * &f;
                    a[i][j] -= s;
                }
                let s = &b[t] * &f;
                b[i] -= s;
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    b.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..k {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = &a[t][j] / &a[t][t];
                for i in 0..m {
                    let s = &a[i][t] * &f;
                    a[i][j] -= s;
                }
                for row in v.iter_mut() {
                    let s = &row[t] * &f;
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, &mut v, t, j);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        t += 1;
    }
    let mut y = vec![BigInt::zero(); k];
    for i in 0..m {
        if i < t {
            let (qt, r) = b[i].div_rem(&a[i][i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = qt;
        } else if !b[i].is_zero() {
            return None;
        }
    }
    Some(
        v.iter()
            .map(|row| row.iter().zip(&y).fold(BigInt::zero(), |acc, (p, q)| acc + p * q))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_inverse() {
        assert_eq!(rank(&[vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0]]), 2);
        assert_eq!(rank(&[vec![0, -1], vec![1, 0]]), 2);
        assert!(rational_inverse(&[vec![1, 2], vec![2, 4]]).is_none());
        let inv = rational_inverse(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(integral(&solve_rational(&inv, &[3, 2])), Some(vec![1, 1]));
    }

    #[test]
    fn left_inverse_scales_identity() {
        let b = vec![vec![0, -2], vec![1, 0], vec![1, 1]];
        let (q, det) = left_inverse(&b).unwrap();
        assert!(det > 0);
        let prod = mat_mul(&q, &b);
        assert_eq!(prod, vec![vec![det, 0], vec![0, det]]);
    }

    #[test]
    fn integer_solve() {
        let big = |r: &[i64]| r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let a = vec![big(&[2, 4]), big(&[6, 8])];
        let x = solve_integer(&a, &big(&[2, 2])).unwrap();
        assert_eq!(x, big(&[-1, 1]));
        // 2x = 1 has no integer solution
        assert!(solve_integer(&[big(&[2])], &big(&[1])).is_none());
        // underdetermined: x + y = 3
        let x = solve_integer(&[big(&[1, 1])], &big(&[3])).unwrap();
        assert_eq!(&x[0] + &x[1], BigInt::from(3));
    }
}
