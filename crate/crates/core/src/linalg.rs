//! Small dense integer and rational linear algebra.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Everything here is sized for root
//! data of rank at most a handful, so no attempt is made at being clever.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type IMat = Vec<Vec<i64>>;
pub type QMat = Vec<Vec<Rational64>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn mat_vec_q(a: &IMat, v: &[Rational64]) -> Vec<Rational64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational64::zero(), |acc, (x, y)| acc + y * *x)
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn to_q(a: &IMat) -> QMat {
    a.iter()
        .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect()
}

/// Multiplicative order of a square integer matrix, if it is at most `cap`.
pub fn matrix_order(a: &IMat, cap: usize) -> Option<usize> {
    let id = identity(a.len());
    let mut p = a.clone();
    for k in 1..=cap {
        if p == id {
            return Some(k);
        }
        p = mat_mul(&p, a);
    }
    None
}

/// Solves `a x = b` for square `a` over `Q`. `None` when `a` is singular.
pub fn solve_q(a: &QMat, b: &[Rational64]) -> Option<Vec<Rational64>> {
    let n = a.len();
    let mut m: QMat = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n]).collect())
}

/// Inverse of a square rational matrix.
pub fn inverse_q(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let cols: Option<Vec<Vec<Rational64>>> = (0..n)
        .map(|j| {
            let e: Vec<Rational64> = (0..n)
                .map(|i| if i == j { Rational64::one() } else { Rational64::zero() })
                .collect();
            solve_q(a, &e)
        })
        .collect();
    cols.map(|c| transpose(&c))
}

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular and the
/// diagonal of `d` nonnegative with each entry dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IMat,
    pub v: IMat,
    /// Diagonal entries; length `min(rows, cols)`, zeros at the end.
    pub diag: Vec<i64>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|&&d| d != 0).count()
    }
}

pub fn smith_normal_form(a: &IMat) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let swap_cols = |m: &mut IMat, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    };

    let steps = rows.min(cols);
    for t in 0..steps {
        // smallest nonzero entry of the trailing block as pivot
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    for k in 0..cols {
                        m[i][k] -= q * m[t][k];
                    }
                    for k in 0..rows {
                        u[i][k] -= q * u[t][k];
                    }
                    if m[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    if m[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t onto the pivot
                let best_row = (t..rows)
                    .filter(|&i| m[i][t] != 0)
                    .min_by_key(|&i| m[i][t].abs())
                    .unwrap_or(t);
                let best_col = (t..cols)
                    .filter(|&j| m[t][j] != 0)
                    .min_by_key(|&j| m[t][j].abs())
                    .unwrap_or(t);
                if m[best_row][t].abs() <= m[t][best_col].abs() {
                    m.swap(t, best_row);
                    u.swap(t, best_row);
                } else {
                    swap_cols(&mut m, t, best_col);
                    swap_cols(&mut v, t, best_col);
                }
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % m[t][t] != 0);
            match bad {
                Some((i, _)) => {
                    for k in 0..cols {
                        m[t][k] += m[i][k];
                    }
                    for k in 0..rows {
                        u[t][k] += u[i][k];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diag = (0..steps).map(|i| m[i][i]).collect();
    Smith { u, v, diag }
}

/// An integer solution of `a x = b`, if one exists.
pub fn solve_z(a: &IMat, b: &[i64]) -> Option<Vec<i64>> {
    let cols = a.first().map_or(0, Vec::len);
    let s = smith_normal_form(a);
    let ub = mat_vec(&s.u, b);
    let rank = s.rank();
    if ub[rank..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut y = vec![0i64; cols];
    for i in 0..rank {
        if ub[i] % s.diag[i] != 0 {
            return None;
        }
        y[i] = ub[i] / s.diag[i];
    }
    Some(mat_vec(&s.v, &y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IMat) {
        let s = smith_normal_form(a);
        let d = mat_mul(&mat_mul(&s.u, a), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(x, s.diag[i]);
                } else {
                    assert_eq!(x, 0, "off-diagonal entry in {d:?}");
                }
            }
        }
        for w in s.diag.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        assert!(s.diag.iter().all(|&x| x >= 0));
    }

    #[test]
    fn smith_examples() {
        check_smith(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        check_smith(&vec![vec![1, -1]]);
        check_smith(&vec![vec![1], vec![-1]]);
        check_smith(&vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        check_smith(&vec![vec![0, 0], vec![0, 0]]);
        check_smith(&vec![vec![6, 4], vec![4, 6]]);
    }

    #[test]
    fn smith_of_a2_cartan() {
        let s = smith_normal_form(&vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(s.diag, vec![1, 3]);
    }

    #[test]
    fn integer_solve() {
        let a = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(solve_z(&a, &[4, 9]), Some(vec![2, 3]));
        assert_eq!(solve_z(&a, &[1, 0]), None);
        let a = vec![vec![1], vec![-1]];
        assert_eq!(solve_z(&a, &[1, -1]), Some(vec![1]));
        assert_eq!(solve_z(&a, &[1, 0]), None);
    }

    #[test]
    fn rational_inverse() {
        let a = to_q(&vec![vec![2, -1], vec![-1, 2]]);
        let inv = inverse_q(&a).unwrap();
        assert_eq!(inv[0][0], Rational64::new(2, 3));
        assert_eq!(inv[0][1], Rational64::new(1, 3));
        assert!(inverse_q(&to_q(&vec![vec![1, 1], vec![1, 1]])).is_none());
    }

    #[test]
    fn order_of_rotation() {
        let r = vec![vec![0, -1], vec![1, 0]];
        assert_eq!(matrix_order(&r, 10), Some(4));
        assert_eq!(matrix_order(&vec![vec![2]], 10), None);
    }

    proptest::proptest! {
        #[test]
        fn smith_is_diagonalization(entries in proptest::collection::vec(-6i64..7, 12)) {
            let a: IMat = entries.chunks(4).map(|c| c.to_vec()).collect();
            check_smith(&a);
        }
    }
}
