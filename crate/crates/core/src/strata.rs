//! The poset `B(G, μ)`: lengths, covers, closure relations, the two
//! q-identities and the point counts they come from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::crosssec::{self, Kind, StratumShape};
use crate::error::{Error, Result};
use crate::isocrystal::{self, SigmaClass};
use crate::rational::{self, CoVec};
use crate::rootdata::RootDatum;

/// Laurent polynomial in `q` with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolyZ {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPolyZ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c q^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        let mut p = Self::default();
        p.add_term(e, c);
        p
    }

    /// `(q − 1)^k`.
    pub fn q_minus_one_pow(k: usize) -> Self {
        let base = Self::monomial(1, 1) - Self::one();
        (0..k).fold(Self::one(), |acc, _| &acc * &base)
    }

    fn add_term(&mut self, e: i64, c: i64) {
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Value at an integer `q ≠ 0`.
    pub fn eval(&self, q: i64) -> Rational64 {
        let q = Rational64::from_integer(q);
        self.terms.iter().fold(Rational64::zero(), |acc, (&e, &c)| {
            let pow = if e >= 0 { q.pow(e as i32) } else { q.recip().pow((-e) as i32) };
            acc + pow * c
        })
    }
}

impl Add for &LaurentPolyZ {
    type Output = LaurentPolyZ;
    fn add(self, rhs: Self) -> LaurentPolyZ {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Add for LaurentPolyZ {
    type Output = LaurentPolyZ;
    fn add(self, rhs: Self) -> LaurentPolyZ {
        &self + &rhs
    }
}

impl Sub for LaurentPolyZ {
    type Output = LaurentPolyZ;
    fn sub(self, rhs: Self) -> LaurentPolyZ {
        let mut out = self;
        for (&e, &c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentPolyZ {
    type Output = LaurentPolyZ;
    fn mul(self, rhs: Self) -> LaurentPolyZ {
        let mut out = LaurentPolyZ::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&e, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if e == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPolyZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn leng_unchecked(datum: &RootDatum, mu: &CoVec, b: &SigmaClass, b2: &SigmaClass) -> i64 {
    let sum = |x: &SigmaClass| -> i64 {
        isocrystal::exponents(datum, mu, &x.nu).into_iter().map(rational::ceil).sum()
    };
    sum(b2) - sum(b)
}

/// `leng(b, b2)` for `b2 ≤ b`.
pub fn length_formula(datum: &RootDatum, mu: &CoVec, b: &SigmaClass, b2: &SigmaClass) -> Result<i64> {
    let kappa = isocrystal::kottwitz_point(datum, mu)?;
    if kappa != b.kappa {
        return Err(Error::KappaMismatch(format!("{} vs {}", kappa, b.kappa)));
    }
    if !isocrystal::dominance_leq(datum, b2, b) {
        return Err(Error::Incomparable);
    }
    let leng = leng_unchecked(datum, mu, b, b2);
    if datum.semisimple_rank() > 0 {
        let shifted = mu + &datum.simple_coroot(0);
        assert_eq!(
            leng,
            leng_unchecked(datum, &shifted, b, b2),
            "length depends on the choice of mu"
        );
    }
    Ok(leng)
}

/// Cover relations `(lower, upper)` as index pairs into `classes`.
pub fn hasse_diagram(datum: &RootDatum, classes: &[SigmaClass]) -> Vec<(usize, usize)> {
    let n = classes.len();
    let lt = |a: usize, b: usize| a != b && classes[a] != classes[b] && isocrystal::dominance_leq(datum, &classes[a], &classes[b]);
    let mut edges = Vec::new();
    for lo in 0..n {
        for hi in 0..n {
            if lt(lo, hi) && !(0..n).any(|m| lt(lo, m) && lt(m, hi)) {
                edges.push((lo, hi));
            }
        }
    }
    edges.sort();
    edges
}

/// Lengths of all maximal chains from `lo` up to `hi` through cover edges.
pub fn chain_lengths(n: usize, edges: &[(usize, usize)], lo: usize, hi: usize) -> BTreeSet<usize> {
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        up[a].push(b);
    }
    let mut memo: Vec<Option<BTreeSet<usize>>> = vec![None; n];
    fn go(v: usize, hi: usize, up: &[Vec<usize>], memo: &mut Vec<Option<BTreeSet<usize>>>) -> BTreeSet<usize> {
        if v == hi {
            return BTreeSet::from([0]);
        }
        if let Some(s) = &memo[v] {
            return s.clone();
        }
        let mut out = BTreeSet::new();
        for &w in &up[v] {
            out.extend(go(w, hi, up, memo).into_iter().map(|l| l + 1));
        }
        memo[v] = Some(out.clone());
        out
    }
    go(lo, hi, &up, &mut memo)
}

/// Whether the stratum of `b2` lies in the closure box of the stratum of `b`.
pub fn closure_contains(shape_b: &StratumShape, shape_b2: &StratumShape) -> Result<bool> {
    if shape_b.mu != shape_b2.mu {
        return Err(Error::KappaMismatch(format!("mu {} vs {}", shape_b.mu, shape_b2.mu)));
    }
    if shape_b.class.kappa != shape_b2.class.kappa {
        return Err(Error::KappaMismatch(format!("{} vs {}", shape_b.class.kappa, shape_b2.class.kappa)));
    }
    let floor = shape_b.ceilings();
    Ok(shape_b2.exponents.iter().zip(&shape_b2.kinds).zip(&floor).all(|((&e, &k), &c)| match k {
        Kind::Circle => e >= Rational64::from_integer(c),
        Kind::Disk => rational::ceil(e) >= c,
    }))
}

/// One summand of an identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityTerm {
    pub nu: CoVec,
    pub kappa: Vec<i64>,
    pub j_size: usize,
    pub leng: i64,
    pub term: LaurentPolyZ,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub mu: CoVec,
    pub terms: Vec<IdentityTerm>,
    pub sum: LaurentPolyZ,
    pub ok: bool,
}

const SAMPLE_Q: [i64; 4] = [2, 3, 4, 5];

fn identity_report(
    datum: &RootDatum,
    mu: &CoVec,
    classes: &[SigmaClass],
    shift: i64,
) -> Result<IdentityReport> {
    let top = isocrystal::top_class(datum, mu)?;
    let mut terms = Vec::new();
    let mut sum = LaurentPolyZ::zero();
    for b in classes {
        let j = isocrystal::j_set(datum, &b.nu).len();
        let leng = length_formula(datum, mu, &top, b)?;
        let term = &LaurentPolyZ::q_minus_one_pow(j) * &LaurentPolyZ::monomial(1, shift - j as i64 - leng);
        sum = &sum + &term;
        terms.push(IdentityTerm { nu: b.nu.clone(), kappa: b.kappa.coords.clone(), j_size: j, leng, term });
    }
    let ok = sum.is_one() && SAMPLE_Q.iter().all(|&q| sum.eval(q).is_one());
    Ok(IdentityReport { mu: mu.clone(), terms, sum, ok })
}

/// `Σ_{b ∈ B(G,μ)} (q−1)^{#J} q^{−#J − leng}`.
pub fn verify_identity_full(datum: &RootDatum, mu: &CoVec) -> Result<IdentityReport> {
    let classes = isocrystal::enumerate_bgmu(datum, mu)?;
    identity_report(datum, mu, &classes, 0)
}

/// `Σ_{b ∈ B(G,μ)_irr} (q−1)^{#J} q^{r − #J − leng}`, or `None` when
/// `B(G,μ)_irr` is empty.
pub fn verify_identity_irr(datum: &RootDatum, mu: &CoVec) -> Result<Option<IdentityReport>> {
    let irr = irreducible_classes(datum, mu)?;
    if irr.is_empty() {
        return Ok(None);
    }
    identity_report(datum, mu, &irr, datum.orbit_count() as i64).map(Some)
}

/// `B(G, μ)_irr` in descending dominance order.
pub fn irreducible_classes(datum: &RootDatum, mu: &CoVec) -> Result<Vec<SigmaClass>> {
    let mut out = Vec::new();
    for b in isocrystal::enumerate_bgmu(datum, mu)? {
        if isocrystal::is_hn_irreducible(datum, mu, &b)? {
            out.push(b);
        }
    }
    Ok(out)
}

/// Smallest level at which the stratum of `shape` is a union of
/// `U_c(ϖ^m O)`-cosets.
pub fn minimal_level(shape: &StratumShape) -> i64 {
    shape
        .exponents
        .iter()
        .zip(&shape.kinds)
        .map(|(&e, &k)| match k {
            Kind::Circle => rational::ceil(e) + 1,
            Kind::Disk => rational::ceil(e),
        })
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Number of `U_c(ϖ^m O)`-cosets in the stratum of `b`.
pub fn point_count(datum: &RootDatum, mu: &CoVec, b: &SigmaClass, m: i64) -> Result<LaurentPolyZ> {
    let shape = crosssec::stratum_shape(datum, mu, b)?;
    if shape.exponents.iter().any(|e| *e < Rational64::zero()) {
        return Err(Error::NotInBGMu(b.to_string()));
    }
    let need = minimal_level(&shape);
    if m < need {
        return Err(Error::LevelTooSmall { level: m, ceiling: need });
    }
    let r = datum.orbit_count() as i64;
    let j = shape.kinds.iter().filter(|&&k| k == Kind::Circle).count();
    let top = isocrystal::top_class(datum, mu)?;
    let leng = length_formula(datum, mu, &top, b)?;
    Ok(&LaurentPolyZ::q_minus_one_pow(j) * &LaurentPolyZ::monomial(1, m * r - j as i64 - leng))
}

/// All exponents of the stratum shape nonnegative.
pub fn mazur_check(datum: &RootDatum, mu: &CoVec, b: &SigmaClass) -> Result<bool> {
    let shape = crosssec::stratum_shape(datum, mu, b)?;
    Ok(shape.exponents.iter().all(|e| *e >= Rational64::zero()))
}

/// One row of the stratum table of `B(G, μ)`.
#[derive(Debug, Clone, Serialize)]
pub struct StratumRow {
    #[serde(flatten)]
    pub shape: StratumShape,
    /// 1-based orbit indices.
    pub j: Vec<usize>,
    pub leng: i64,
}

pub fn stratum_table(datum: &RootDatum, mu: &CoVec) -> Result<Vec<StratumRow>> {
    let top = isocrystal::top_class(datum, mu)?;
    isocrystal::enumerate_bgmu(datum, mu)?
        .into_iter()
        .map(|b| {
            let shape = crosssec::stratum_shape(datum, mu, &b)?;
            let j = isocrystal::j_set(datum, &b.nu).into_iter().map(|i| i + 1).collect();
            let leng = length_formula(datum, mu, &top, &b)?;
            Ok(StratumRow { shape, j, leng })
        })
        .collect()
}

fn join<T: fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn stratum_table_tsv(rows: &[StratumRow]) -> String {
    let mut out = String::from("nu\tkappa\tJ\texponents\tkinds\tcodim\tleng\n");
    for row in rows {
        let s = &row.shape;
        let _ = writeln!(
            out,
            "{}\t{}\t{{{}}}\t{}\t{}\t{}\t{}",
            s.class.nu,
            s.class.kappa,
            join(&row.j),
            join(&s.exponents),
            join(&s.kinds),
            s.codim(),
            row.leng
        );
    }
    out
}

/// Hasse diagram of `B(G, μ)` in DOT, edges pointing up.
pub fn hasse_dot(datum: &RootDatum, mu: &CoVec) -> Result<String> {
    let rows = stratum_table(datum, mu)?;
    let classes: Vec<SigmaClass> = rows.iter().map(|r| r.shape.class.clone()).collect();
    let edges = hasse_diagram(datum, &classes);
    let mut out = String::new();
    let _ = writeln!(out, "digraph bgmu {{");
    let _ = writeln!(out, "  label=\"{} mu={}\";", datum.name(), mu);
    let _ = writeln!(out, "  rankdir=BT;");
    for (i, row) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [label=\"nu={}\\nkappa={}\\nleng={}\"];",
            row.shape.class.nu, row.shape.class.kappa, row.leng
        );
    }
    for (lo, hi) in edges {
        let _ = writeln!(out, "  n{lo} -> n{hi};");
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::rootdata::preset;

    fn q() -> LaurentPolyZ {
        LaurentPolyZ::monomial(1, 1)
    }

    #[test]
    fn laurent_arithmetic() {
        let p = LaurentPolyZ::q_minus_one_pow(2);
        assert_eq!(p, &(&q() * &q()) + &(LaurentPolyZ::monomial(-2, 1) + LaurentPolyZ::one()));
        assert_eq!(p.to_string(), "q^2 - 2*q + 1");
        assert_eq!(p.eval(3), int(4));
        let inv = LaurentPolyZ::monomial(1, -1);
        assert_eq!((&q() * &inv), LaurentPolyZ::one());
        assert_eq!(inv.eval(2), rat(1, 2));
        assert!((p.clone() - p).is_zero());
        assert_eq!(LaurentPolyZ::monomial(0, 3), LaurentPolyZ::zero());
        assert_eq!(LaurentPolyZ::monomial(-1, -2).to_string(), "-q^-2");
    }

    fn classes(name: &str, mu: &[i64]) -> (RootDatum, CoVec, Vec<SigmaClass>) {
        let d = preset(name).unwrap();
        let mu = CoVec::from_ints(mu);
        let b = isocrystal::enumerate_bgmu(&d, &mu).unwrap();
        (d, mu, b)
    }

    #[test]
    fn length_examples() {
        let (d, mu, b) = classes("GL2", &[1, 0]);
        assert_eq!(length_formula(&d, &mu, &b[0], &b[1]).unwrap(), 1);
        assert_eq!(length_formula(&d, &mu, &b[1], &b[1]).unwrap(), 0);
        assert_eq!(length_formula(&d, &mu, &b[1], &b[0]), Err(Error::Incomparable));
        let (d, mu, b) = classes("GL3", &[1, 0, 0]);
        assert_eq!(length_formula(&d, &mu, &b[0], &b[2]).unwrap(), 2);
    }

    #[test]
    fn hasse_examples() {
        let (d, _, b) = classes("GL2", &[1, 0]);
        assert_eq!(hasse_diagram(&d, &b), vec![(1, 0)]);
        let (d, _, b) = classes("GL3", &[1, 0, 0]);
        let e = hasse_diagram(&d, &b);
        assert_eq!(e, vec![(1, 0), (2, 1)]);
        assert_eq!(chain_lengths(3, &e, 2, 0), BTreeSet::from([2]));
        assert!(hasse_diagram(&d, &b[..1]).is_empty());
    }

    #[test]
    fn closure_examples() {
        let (d, mu, b) = classes("GL2", &[1, 0]);
        let top = crosssec::stratum_shape(&d, &mu, &b[0]).unwrap();
        let basic = crosssec::stratum_shape(&d, &mu, &b[1]).unwrap();
        assert!(closure_contains(&top, &basic).unwrap());
        assert!(closure_contains(&top, &top).unwrap());
        assert!(!closure_contains(&basic, &top).unwrap());
    }

    #[test]
    fn identity_examples() {
        for (name, mu) in [("GL2", vec![1, 0]), ("GL2", vec![1, 1]), ("GL3", vec![1, 0, 0])] {
            let d = preset(name).unwrap();
            let mu = CoVec::from_ints(&mu);
            let r = verify_identity_full(&d, &mu).unwrap();
            assert!(r.ok, "{name} {mu}: {}", r.sum);
        }
        let gl2 = preset("GL2").unwrap();
        let r = verify_identity_full(&gl2, &CoVec::from_ints(&[1, 0])).unwrap();
        assert_eq!(r.terms[0].term.to_string(), "1 - q^-1");
        assert_eq!(r.terms[1].term.to_string(), "q^-1");
        let irr = verify_identity_irr(&gl2, &CoVec::from_ints(&[1, 0])).unwrap().unwrap();
        assert!(irr.ok);
        assert_eq!(irr.terms.len(), 1);
        assert!(verify_identity_irr(&gl2, &CoVec::from_ints(&[1, 1])).unwrap().is_none());
        let gl3 = preset("GL3").unwrap();
        assert!(verify_identity_irr(&gl3, &CoVec::from_ints(&[1, 0, 0])).unwrap().unwrap().ok);
    }

    #[test]
    fn point_count_examples() {
        let (d, mu, b) = classes("GL2", &[1, 0]);
        let q1 = LaurentPolyZ::q_minus_one_pow(1);
        assert_eq!(point_count(&d, &mu, &b[0], 1).unwrap(), q1);
        assert_eq!(point_count(&d, &mu, &b[1], 1).unwrap(), LaurentPolyZ::one());
        assert_eq!(point_count(&d, &mu, &b[0], 2).unwrap(), &q1 * &q());
        assert!(matches!(point_count(&d, &mu, &b[0], 0), Err(Error::LevelTooSmall { .. })));
    }

    #[test]
    fn mazur_examples() {
        let (d, mu, b) = classes("GL2", &[1, 0]);
        assert!(mazur_check(&d, &mu, &b[1]).unwrap());
        assert!(mazur_check(&d, &mu, &b[0]).unwrap());
        let out = SigmaClass { kappa: b[0].kappa.clone(), nu: CoVec::from_ints(&[2, -1]) };
        assert!(!mazur_check(&d, &mu, &out).unwrap());
    }

    #[test]
    fn table_and_dot() {
        let d = preset("GL3").unwrap();
        let mu = CoVec::from_ints(&[1, 0, 0]);
        let rows = stratum_table(&d, &mu).unwrap();
        assert_eq!(rows.iter().map(|r| r.leng).collect::<Vec<_>>(), vec![0, 1, 2]);
        let tsv = stratum_table_tsv(&rows);
        assert_eq!(tsv.lines().count(), 4);
        assert!(tsv.lines().nth(2).unwrap().starts_with("(1/2,1/2,0)\t[1]\t{2}\t1/2,0\tdisk,circle\t1\t1"));
        let dot = hasse_dot(&d, &mu).unwrap();
        assert!(dot.contains("n1 -> n0;") && dot.contains("n2 -> n1;"));
    }
}
