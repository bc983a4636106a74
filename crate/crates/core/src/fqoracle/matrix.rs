//! Square matrices over a truncated series ring.

use std::fmt;

use super::series::TruncSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncMatrix {
    rows: Vec<Vec<TruncSeries>>,
}

impl TruncMatrix {
    pub fn new(rows: Vec<Vec<TruncSeries>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        TruncMatrix { rows }
    }

    pub fn identity(n: usize, p: u64, prec: usize) -> Self {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| TruncSeries::monomial(p, prec, i64::from(i == j), 0)).collect())
                .collect(),
        )
    }

    fn zero(&self) -> TruncSeries {
        let x = &self.rows[0][0];
        TruncSeries::zero(x.p(), x.prec())
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncSeries {
        &self.rows[i][j]
    }

    pub fn prec(&self) -> usize {
        self.rows.first().map_or(0, |r| r[0].prec())
    }

    pub fn mul(&self, other: &TruncMatrix) -> TruncMatrix {
        let n = self.size();
        let zero = self.zero();
        TruncMatrix::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n).fold(zero.clone(), |acc, k| &acc + &(&self.rows[i][k] * &other.rows[k][j]))
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Determinant of the submatrix on `rows × cols`, by cofactor expansion.
    fn minor(&self, rows: &[usize], cols: &[usize]) -> TruncSeries {
        if rows.len() == 1 {
            return self.rows[rows[0]][cols[0]].clone();
        }
        let zero = self.zero();
        let mut acc = zero;
        for (k, &c) in cols.iter().enumerate() {
            let a = &self.rows[rows[0]][c];
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a * &self.minor(&rows[1..], &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub fn det(&self) -> TruncSeries {
        let all: Vec<usize> = (0..self.size()).collect();
        self.minor(&all, &all)
    }

    /// `a_1, …, a_n` with `det(t − g) = t^n + a_1 t^{n−1} + … + a_n`.
    pub fn char_poly(&self) -> Vec<TruncSeries> {
        let n = self.size();
        (1..=n)
            .map(|k| {
                let zero = self.zero();
                let e_k = subsets(n, k).iter().fold(zero, |acc, s| &acc + &self.minor(s, s));
                if k % 2 == 0 {
                    e_k
                } else {
                    -&e_k
                }
            })
            .collect()
    }

    /// Elementary divisor valuations in descending order, from the minimal
    /// valuations of the `k × k` minors.
    pub fn invariant_factors(&self) -> Result<Vec<i64>> {
        let n = self.size();
        let mut delta = vec![0usize; n + 1];
        for k in 1..=n {
            let sets = subsets(n, k);
            let best = sets
                .iter()
                .flat_map(|r| sets.iter().map(move |c| (r, c)))
                .filter_map(|(r, c)| self.minor(r, c).valuation())
                .min()
                .ok_or_else(|| Error::TruncationTooCoarse {
                    level: self.prec(),
                    detail: format!("every {k}x{k} minor vanishes at this precision"),
                })?;
            delta[k] = best;
        }
        let mut d: Vec<i64> = (1..=n).map(|k| delta[k] as i64 - delta[k - 1] as i64).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        Ok(d)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

impl fmt::Display for TruncMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
