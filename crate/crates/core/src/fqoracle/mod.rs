//! Finite-field check of the point counts for split `GL_n`.
//!
//! Cross-section points with coordinates in `F_p[ϖ]/ϖ^M` are built as
//! matrices, classified by determinant valuation and Newton polygon, and
//! tallied per class.

mod matrix;
mod series;

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

pub use matrix::TruncMatrix;
pub use series::TruncSeries;

use crate::crosssec::{self, Valuation};
use crate::error::{Error, Result};
use crate::isocrystal::{self, SigmaClass};
use crate::rational::CoVec;
use crate::rootdata::{preset, RootDatum};
use crate::strata;

/// `diag(ϖ^μ) · s̃_1 U_1(x_1) ⋯ s̃_{n−1} U_{n−1}(x_{n−1})` with
/// `s̃_i` acting as `[[0, −1], [1, 0]]` on the block `(i, i+1)`.
pub fn cross_section_matrix(n: usize, mu: &[i64], coords: &[TruncSeries]) -> Result<TruncMatrix> {
    if mu.len() != n {
        return Err(Error::Dimension { expected: n, got: mu.len() });
    }
    if coords.len() + 1 != n {
        return Err(Error::Dimension { expected: n - 1, got: coords.len() });
    }
    if let Some(&m) = mu.iter().find(|&&m| m < 0) {
        return Err(Error::InvalidDatum(format!("negative exponent {m} in mu")));
    }
    let (p, prec) = match coords.first() {
        Some(x) => (x.p(), x.prec()),
        None => return Err(Error::InvalidDatum("GL_1 has no cross-section coordinates".into())),
    };
    let one = |c: i64| TruncSeries::monomial(p, prec, c, 0);
    let zero = TruncSeries::zero(p, prec);
    let mut g = TruncMatrix::new(
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { TruncSeries::monomial(p, prec, 1, mu[i] as usize) } else { zero.clone() }).collect())
            .collect(),
    );
    for (i, x) in coords.iter().enumerate() {
        let mut f: Vec<Vec<TruncSeries>> =
            (0..n).map(|a| (0..n).map(|b| one(i64::from(a == b))).collect()).collect();
        // s̃_i U_i(x) on the block (i, i+1) is [[0, −1], [1, x]]
        f[i][i] = zero.clone();
        f[i][i + 1] = one(-1);
        f[i + 1][i] = one(1);
        f[i + 1][i + 1] = x.clone();
        g = g.mul(&TruncMatrix::new(f));
    }
    Ok(g)
}

/// Slopes of the lower convex hull of `(0,0), (1, v_1), …, (n, v_n)`,
/// largest first.
pub fn newton_polygon_slopes(vals: &[Valuation]) -> Result<CoVec> {
    let n = vals.len();
    if n == 0 {
        return Ok(CoVec::new(Vec::new()));
    }
    if vals[n - 1] == Valuation::Infinite {
        return Err(Error::InvalidDatum("constant term of the characteristic polynomial vanishes".into()));
    }
    let point = |i: usize| -> Option<i64> {
        if i == 0 {
            Some(0)
        } else {
            vals[i - 1].finite()
        }
    };
    let mut slopes = Vec::with_capacity(n);
    let mut x = 0usize;
    while x < n {
        let y = point(x).unwrap();
        let mut best: Option<(Rational64, usize)> = None;
        for j in x + 1..=n {
            if let Some(v) = point(j) {
                let s = Rational64::new(v - y, (j - x) as i64);
                if best.is_none_or(|(b, _)| s <= b) {
                    best = Some((s, j));
                }
            }
        }
        let (s, j) = best.expect("last vertex is finite");
        slopes.extend(std::iter::repeat_n(s, j - x));
        x = j;
    }
    slopes.reverse();
    Ok(CoVec::new(slopes))
}

fn classify_with(datum: &RootDatum, g: &TruncMatrix) -> Result<SigmaClass> {
    let n = g.size();
    let prec = g.prec();
    let vdet = g.det().valuation().ok_or_else(|| Error::TruncationTooCoarse {
        level: prec,
        detail: "determinant vanishes at this precision".into(),
    })?;
    // coefficients vanishing below the precision lie above the segment to (n, vdet)
    let vals: Vec<Valuation> = g
        .char_poly()
        .iter()
        .map(|a| a.valuation().map_or(Valuation::Infinite, |v| Valuation::Finite(v as i64)))
        .collect();
    let nu = newton_polygon_slopes(&vals)?;
    let mut lam = vec![0i64; n];
    lam[0] = vdet as i64;
    let kappa = isocrystal::kottwitz_point(datum, &CoVec::from_ints(&lam))?;
    Ok(SigmaClass { kappa, nu })
}

fn gl(n: usize) -> Result<RootDatum> {
    preset(&format!("GL{n}"))
}

/// `(κ, ν)` of a matrix: determinant valuation and Newton polygon slopes.
pub fn classify_matrix(g: &TruncMatrix) -> Result<SigmaClass> {
    classify_with(&gl(g.size())?, g)
}

/// The dominant `λ` with `g ∈ K ϖ^λ K`.
pub fn invariant_factors(g: &TruncMatrix) -> Result<Vec<i64>> {
    g.invariant_factors()
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[derive(Debug, Clone, Serialize)]
pub struct TallyRow {
    pub class: SigmaClass,
    pub predicted: i64,
    pub observed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TallyReport {
    pub n: usize,
    pub mu: Vec<i64>,
    pub p: u64,
    #[serde(rename = "M")]
    pub level: usize,
    pub rows: Vec<TallyRow>,
    pub total: u64,
    pub expected_total: u64,
    /// Points whose matrix class differs from their valuation-pattern class.
    pub classification_mismatches: u64,
    /// Points whose elementary divisors differ from sorted `μ`.
    pub invariant_factor_mismatches: u64,
    pub diagnostics: Vec<String>,
    pub ok: bool,
}

impl TallyReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("class\tpredicted\tobserved\n");
        for row in &self.rows {
            let _ = writeln!(out, "{}\t{}\t{}", row.class, row.predicted, row.observed);
        }
        let _ = writeln!(out, "total\t{}\t{}", self.expected_total, self.total);
        out
    }
}

#[derive(Default)]
struct Partial {
    counts: HashMap<SigmaClass, u64>,
    mismatches: u64,
    bad_factors: u64,
    diagnostics: Vec<String>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        self.mismatches += other.mismatches;
        self.bad_factors += other.bad_factors;
        self.diagnostics.extend(other.diagnostics);
        self
    }
}

const MAX_DIAGNOSTICS: usize = 8;

/// Classifies every point of `U_c(O)/U_c(ϖ^M O)` and compares the tally
/// with the predicted point counts at `q = p`.
pub fn tally_strata(n: usize, mu: &[i64], p: u64, level: usize) -> Result<TallyReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if level == 0 {
        return Err(Error::LevelTooSmall { level: 0, ceiling: 1 });
    }
    let datum = gl(n)?;
    let mu_v = CoVec::from_ints(mu);
    let classes = isocrystal::enumerate_bgmu(&datum, &mu_v)?;
    for b in &classes {
        let need = strata::minimal_level(&crosssec::stratum_shape(&datum, &mu_v, b)?);
        if (level as i64) < need {
            return Err(Error::LevelTooSmall { level: level as i64, ceiling: need });
        }
    }
    let r = n - 1;
    let prec = level + mu.iter().sum::<i64>() as usize + 1;
    let per_coord = (p as u128).pow(level as u32);
    let total = per_coord.pow(r as u32);
    let total = u64::try_from(total).map_err(|_| Error::IterationCap(usize::MAX))?;
    let mut sorted_mu = mu.to_vec();
    sorted_mu.sort_unstable_by(|a, b| b.cmp(a));

    let partial = (0..total)
        .into_par_iter()
        .try_fold(Partial::default, |mut acc, idx| -> Result<Partial> {
            let mut t = idx;
            let mut coords = Vec::with_capacity(r);
            let mut pattern = Vec::with_capacity(r);
            for _ in 0..r {
                let digits: Vec<u64> = (0..level)
                    .map(|_| {
                        let d = t % p;
                        t /= p;
                        d
                    })
                    .collect();
                pattern.push(match digits.iter().position(|&d| d != 0) {
                    Some(v) => Valuation::Finite(v as i64),
                    None => Valuation::Infinite,
                });
                coords.push(TruncSeries::from_coeffs(p, prec, &digits));
            }
            let g = cross_section_matrix(n, mu, &coords)?;
            let class = classify_with(&datum, &g)?;
            let predicted = crosssec::classify_valuation_pattern(&datum, &mu_v, &pattern)?;
            if class != predicted {
                acc.mismatches += 1;
                if acc.diagnostics.len() < MAX_DIAGNOSTICS {
                    acc.diagnostics.push(format!(
                        "point {idx}: matrix class {class}, valuation-pattern class {predicted}"
                    ));
                }
            }
            if g.invariant_factors()? != sorted_mu {
                acc.bad_factors += 1;
                if acc.diagnostics.len() < MAX_DIAGNOSTICS {
                    acc.diagnostics.push(format!("point {idx}: elementary divisors differ from mu"));
                }
            }
            *acc.counts.entry(class).or_insert(0) += 1;
            Ok(acc)
        })
        .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))?;

    let mut seen: Vec<SigmaClass> = partial.counts.keys().cloned().collect();
    for b in &classes {
        if !partial.counts.contains_key(b) {
            seen.push(b.clone());
        }
    }
    isocrystal::sort_classes(&datum, &mu_v, &mut seen);
    let mut rows = Vec::new();
    for b in seen {
        let predicted = if classes.contains(&b) {
            let poly = strata::point_count(&datum, &mu_v, &b, level as i64)?;
            let v = poly.eval(p as i64);
            assert!(v.is_integer(), "point count is a polynomial at this level");
            v.to_integer()
        } else {
            0
        };
        let observed = partial.counts.get(&b).copied().unwrap_or(0);
        rows.push(TallyRow { class: b, predicted, observed });
    }
    let observed_total: u64 = rows.iter().map(|r| r.observed).sum();
    let mut diagnostics = partial.diagnostics;
    diagnostics.sort();
    diagnostics.truncate(MAX_DIAGNOSTICS);
    let ok = rows.iter().all(|r| r.predicted >= 0 && r.predicted as u64 == r.observed)
        && observed_total == total
        && partial.mismatches == 0
        && partial.bad_factors == 0;
    Ok(TallyReport {
        n,
        mu: mu.to_vec(),
        p,
        level,
        rows,
        total: observed_total,
        expected_total: total,
        classification_mismatches: partial.mismatches,
        invariant_factor_mismatches: partial.bad_factors,
        diagnostics,
        ok,
    })
}
