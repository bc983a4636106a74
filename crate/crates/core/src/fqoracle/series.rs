//! Power series over `F_p` truncated at `ϖ^prec`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ_{k < prec} c_k ϖ^k` with `c_k ∈ F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    p: u64,
    coeffs: Vec<u64>,
}

impl TruncSeries {
    pub fn zero(p: u64, prec: usize) -> Self {
        TruncSeries { p, coeffs: vec![0; prec] }
    }

    /// `c ϖ^k`, zero when `k ≥ prec`.
    pub fn monomial(p: u64, prec: usize, c: i64, k: usize) -> Self {
        let mut s = Self::zero(p, prec);
        if k < prec {
            s.coeffs[k] = c.rem_euclid(p as i64) as u64;
        }
        s
    }

    /// A polynomial in `ϖ`, coefficients reduced mod `p` and truncated.
    pub fn from_coeffs(p: u64, prec: usize, coeffs: &[u64]) -> Self {
        let mut s = Self::zero(p, prec);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c % p;
        }
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Valuation, or `None` when every stored coefficient vanishes.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Multiplication by `ϖ^k`.
    pub fn shift(&self, k: usize) -> Self {
        let prec = self.prec();
        let mut s = Self::zero(self.p, prec);
        for i in k..prec {
            s.coeffs[i] = self.coeffs[i - k];
        }
        s
    }

    fn check(&self, other: &Self) {
        assert_eq!((self.p, self.prec()), (other.p, other.prec()), "mixed truncated rings");
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: Self) -> TruncSeries {
        self.check(rhs);
        let p = self.p;
        TruncSeries { p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| (a + b) % p).collect() }
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: Self) -> TruncSeries {
        self.check(rhs);
        let p = self.p;
        TruncSeries { p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| (a + p - b) % p).collect() }
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        let p = self.p;
        TruncSeries { p, coeffs: self.coeffs.iter().map(|a| (p - a) % p).collect() }
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: Self) -> TruncSeries {
        self.check(rhs);
        let (p, prec) = (self.p, self.prec());
        let mut out = vec![0u64; prec];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.coeffs[..prec - i].iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        TruncSeries { p, coeffs: out }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}w"),
                _ => format!("{c}w^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "O(w^{})", self.prec())
        } else {
            write!(f, "{} + O(w^{})", terms.join(" + "), self.prec())
        }
    }
}
