//! σ-conjugacy class invariants: Kottwitz points, Newton points, the set
//! `B(G, μ)` and the dominance order on it.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IMat};
use crate::rational::{self, CoVec};
use crate::rootdata::{RootDatum, WeylWord};

/// Presentation of `π_1(G)_σ = X_* / (ZΦ^∨ + (1−σ)X_*)` as a product of
/// cyclic groups, fixed once per datum by a Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KottwitzPresentation {
    /// One row of the left transform per nontrivial invariant factor.
    rows: IMat,
    /// Invariant-factor moduli; 0 is a free factor.
    moduli: Vec<i64>,
}

impl KottwitzPresentation {
    pub(crate) fn new(rank: usize, coroots: &IMat, sigma: &IMat) -> Self {
        // columns: the simple coroots, then (1 − σ) e_k
        let mut m = vec![Vec::new(); rank];
        for a in 0..rank {
            for c in coroots {
                m[a].push(c[a]);
            }
            for k in 0..rank {
                m[a].push(i64::from(a == k) - sigma[a][k]);
            }
        }
        let s = linalg::smith_normal_form(&m);
        let mut rows = Vec::new();
        let mut moduli = Vec::new();
        for i in 0..rank {
            let d = s.diag.get(i).copied().unwrap_or(0);
            if d == 1 {
                continue;
            }
            let mut row = s.u[i].clone();
            // a free row is only determined up to sign
            if d == 0 && row.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            rows.push(row);
            moduli.push(d);
        }
        KottwitzPresentation { rows, moduli }
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn class_of(&self, lam: &[i64]) -> KottwitzClass {
        let coords = self
            .rows
            .iter()
            .zip(&self.moduli)
            .map(|(row, &d)| {
                let x: i64 = row.iter().zip(lam).map(|(a, b)| a * b).sum();
                if d == 0 {
                    x
                } else {
                    x.mod_floor(&d)
                }
            })
            .collect();
        KottwitzClass { coords, moduli: self.moduli.clone() }
    }
}

/// An element of `π_1(G)_σ` in the datum's fixed presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KottwitzClass {
    pub coords: Vec<i64>,
    pub moduli: Vec<i64>,
}

impl fmt::Display for KottwitzClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A σ-conjugacy class, recorded by its pair of invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaClass {
    pub kappa: KottwitzClass,
    /// Dominant, σ-invariant Newton point.
    pub nu: CoVec,
}

impl fmt::Display for SigmaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu={} kappa={}", self.nu, self.kappa)
    }
}

#[derive(Serialize, Deserialize)]
struct SigmaClassJson {
    kappa: Vec<i64>,
    nu: CoVec,
}

impl Serialize for SigmaClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SigmaClassJson { kappa: self.kappa.coords.clone(), nu: self.nu.clone() }.serialize(s)
    }
}

impl SigmaClass {
    /// Rebuilds a class from its JSON form, validated against `datum`.
    pub fn from_json(datum: &RootDatum, js: &str) -> Result<Self> {
        let raw: SigmaClassJson =
            serde_json::from_str(js).map_err(|e| Error::Parse(e.to_string()))?;
        let moduli = datum.kottwitz_presentation().moduli().to_vec();
        if raw.kappa.len() != moduli.len() {
            return Err(Error::Dimension { expected: moduli.len(), got: raw.kappa.len() });
        }
        if raw.nu.len() != datum.rank() {
            return Err(Error::Dimension { expected: datum.rank(), got: raw.nu.len() });
        }
        if raw.kappa.iter().zip(&moduli).any(|(&c, &d)| d != 0 && (c < 0 || c >= d)) {
            return Err(Error::Parse("Kottwitz residue not reduced".into()));
        }
        if !datum.is_dominant(&raw.nu) || datum.sigma_co(&raw.nu) != raw.nu {
            return Err(Error::NonDominant(raw.nu.to_string()));
        }
        Ok(SigmaClass { kappa: KottwitzClass { coords: raw.kappa, moduli }, nu: raw.nu })
    }
}

/// Image of an integral cocharacter in `π_1(G)_σ`.
pub fn kottwitz_point(datum: &RootDatum, lam: &CoVec) -> Result<KottwitzClass> {
    check_dim(datum, lam)?;
    let ints = lam.to_ints().ok_or_else(|| Error::NonIntegral(lam.to_string()))?;
    Ok(datum.kottwitz_presentation().class_of(&ints))
}

/// Dominant representative of the `(wσ)`-average of `lam`.
pub fn newton_point(datum: &RootDatum, lam: &CoVec, w: &WeylWord) -> CoVec {
    let m = linalg::mat_mul(&datum.word_matrix(w), datum.sigma_lattice());
    let order = linalg::matrix_order(&m, 10_000).expect("wσ has finite order");
    let mut acc = lam.clone();
    let mut cur = lam.clone();
    for _ in 1..order {
        cur = CoVec::new(linalg::mat_vec_q(&m, cur.coords()));
        acc = &acc + &cur;
    }
    let avg = acc.scale(Rational64::new(1, order as i64));
    datum.dominant_representative(&avg).0
}

fn check_dim(datum: &RootDatum, v: &CoVec) -> Result<()> {
    if v.len() != datum.rank() {
        return Err(Error::Dimension { expected: datum.rank(), got: v.len() });
    }
    Ok(())
}

/// `μ^◇`, the σ-average of `mu`.
pub fn mu_diamond(datum: &RootDatum, mu: &CoVec) -> CoVec {
    datum.sigma_average(mu)
}

/// `e_i = ⟨μ − ν, ω_i⟩` for every orbit index `i`.
pub fn exponents(datum: &RootDatum, mu: &CoVec, nu: &CoVec) -> Vec<Rational64> {
    let diff = mu - nu;
    (0..datum.orbit_count())
        .map(|i| datum.pair(&diff, &datum.orbit_weight(i).expect("orbit index in range")))
        .collect()
}

/// Orbit indices `i` with `⟨ν, α_i⟩ > 0`.
pub fn j_set(datum: &RootDatum, nu: &CoVec) -> Vec<usize> {
    (0..datum.orbit_count())
        .filter(|&i| datum.pair_simple_root(nu, datum.orbit_reps()[i]).is_positive())
        .collect()
}

/// Solves for a σ-invariant `ν = base − Σ_O (e_O/|O|) α_O^∨` with `e_i`
/// pinned for orbits in `in_j` and `⟨ν, α_j⟩ = 0` for the rest. Returns
/// `ν` and the full exponent vector.
pub(crate) fn solve_orbit_system(
    datum: &RootDatum,
    base: &CoVec,
    in_j: &[bool],
    pinned: &[Rational64],
) -> Option<(CoVec, Vec<Rational64>)> {
    let r = datum.orbit_count();
    let orbits = datum.sigma_orbits();
    let cartan = datum.cartan();
    // f[j][o] = ⟨α_O^∨, α_{rep j}⟩ / |O|
    let f = |j: usize, o: usize| -> Rational64 {
        let rep = datum.orbit_reps()[j];
        let s: i64 = orbits[o].iter().map(|&m| cartan[m][rep]).sum();
        Rational64::new(s, orbits[o].len() as i64)
    };
    let free: Vec<usize> = (0..r).filter(|&o| !in_j[o]).collect();
    let mut e: Vec<Rational64> = (0..r)
        .map(|o| if in_j[o] { pinned[o] } else { Rational64::zero() })
        .collect();
    if !free.is_empty() {
        let a: Vec<Vec<Rational64>> =
            free.iter().map(|&j| free.iter().map(|&o| f(j, o)).collect()).collect();
        let b: Vec<Rational64> = free
            .iter()
            .map(|&j| {
                let mut rhs = datum.pair_simple_root(base, datum.orbit_reps()[j]);
                for o in (0..r).filter(|&o| in_j[o]) {
                    rhs -= f(j, o) * pinned[o];
                }
                rhs
            })
            .collect();
        let sol = linalg::solve_q(&a, &b)?;
        for (&o, x) in free.iter().zip(sol) {
            e[o] = x;
        }
    }
    let mut nu = base.clone();
    for o in 0..r {
        let k = e[o] / Rational64::from_integer(orbits[o].len() as i64);
        nu = &nu - &datum.orbit_coroot(o).scale(k);
    }
    Some((nu, e))
}

/// Checks the shape conditions of a candidate from [`solve_orbit_system`]:
/// strictly positive on `J`, and the exponents of `J` integral.
fn is_valid_class(datum: &RootDatum, nu: &CoVec, in_j: &[bool], e: &[Rational64]) -> bool {
    (0..datum.orbit_count()).all(|i| {
        if in_j[i] {
            datum.pair_simple_root(nu, datum.orbit_reps()[i]).is_positive() && e[i].is_integer()
        } else {
            true
        }
    })
}

fn require_integral_dominant(datum: &RootDatum, mu: &CoVec) -> Result<()> {
    check_dim(datum, mu)?;
    if !mu.is_integral() {
        return Err(Error::NonIntegral(mu.to_string()));
    }
    if !datum.is_dominant(mu) {
        return Err(Error::NonDominant(mu.to_string()));
    }
    Ok(())
}

/// Sorts classes by descending dominance: increasing codimension
/// `Σ⌈⟨μ−ν, ω_i⟩⌉`, ties broken by `ν` descending.
pub fn sort_classes(datum: &RootDatum, mu: &CoVec, classes: &mut [SigmaClass]) {
    classes.sort_by_cached_key(|b| {
        let codim: i64 = exponents(datum, mu, &b.nu).into_iter().map(rational::ceil).sum();
        (codim, std::cmp::Reverse(b.nu.clone()), b.kappa.clone())
    });
}

/// The Kottwitz set `B(G, μ)` for integral dominant `μ`, maximal element first.
pub fn enumerate_bgmu(datum: &RootDatum, mu: &CoVec) -> Result<Vec<SigmaClass>> {
    require_integral_dominant(datum, mu)?;
    let kappa = kottwitz_point(datum, mu)?;
    let base = mu_diamond(datum, mu);
    let r = datum.orbit_count();
    let caps: Vec<i64> = (0..r)
        .map(|i| datum.pair(&base, &datum.orbit_weight(i).unwrap()).floor().to_integer())
        .collect();
    let mut found: BTreeSet<SigmaClass> = BTreeSet::new();
    for mask in 0u32..(1 << r) {
        let in_j: Vec<bool> = (0..r).map(|i| mask & (1 << i) != 0).collect();
        let members: Vec<usize> = (0..r).filter(|&i| in_j[i]).collect();
        for_each_box_point(&members.iter().map(|&i| (0, caps[i])).collect::<Vec<_>>(), |n| {
            let mut pinned = vec![Rational64::zero(); r];
            for (&i, &x) in members.iter().zip(n) {
                pinned[i] = Rational64::from_integer(x);
            }
            if let Some((nu, e)) = solve_orbit_system(datum, &base, &in_j, &pinned) {
                let nonneg = (0..r).all(|j| in_j[j] || !e[j].is_negative());
                if nonneg && is_valid_class(datum, &nu, &in_j, &e) {
                    found.insert(SigmaClass { kappa: kappa.clone(), nu });
                }
            }
        });
    }
    let mut out: Vec<SigmaClass> = found.into_iter().collect();
    sort_classes(datum, mu, &mut out);
    Ok(out)
}

/// All classes with `κ = κ(ϖ^μ)` whose exponent vector lies in `[lo, hi]^r`.
/// `mu` need only be integral.
pub fn enumerate_kappa_classes(datum: &RootDatum, mu: &CoVec, lo: i64, hi: i64) -> Result<Vec<SigmaClass>> {
    let kappa = kottwitz_point(datum, mu)?;
    let base = mu_diamond(datum, mu);
    let r = datum.orbit_count();
    let (lo_q, hi_q) = (Rational64::from_integer(lo), Rational64::from_integer(hi));
    let mut found: BTreeSet<SigmaClass> = BTreeSet::new();
    for mask in 0u32..(1 << r) {
        let in_j: Vec<bool> = (0..r).map(|i| mask & (1 << i) != 0).collect();
        let members: Vec<usize> = (0..r).filter(|&i| in_j[i]).collect();
        for_each_box_point(&vec![(lo, hi); members.len()], |n| {
            let mut pinned = vec![Rational64::zero(); r];
            for (&i, &x) in members.iter().zip(n) {
                pinned[i] = Rational64::from_integer(x);
            }
            if let Some((nu, e)) = solve_orbit_system(datum, &base, &in_j, &pinned) {
                let in_box = e.iter().all(|x| *x >= lo_q && *x <= hi_q);
                if in_box && is_valid_class(datum, &nu, &in_j, &e) {
                    found.insert(SigmaClass { kappa: kappa.clone(), nu });
                }
            }
        });
    }
    let mut out: Vec<SigmaClass> = found.into_iter().collect();
    sort_classes(datum, mu, &mut out);
    Ok(out)
}

/// Calls `f` on every integer point of a product of closed intervals.
pub(crate) fn for_each_box_point(ranges: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    if ranges.iter().any(|&(a, b)| a > b) {
        return;
    }
    let mut cur: Vec<i64> = ranges.iter().map(|&(a, _)| a).collect();
    loop {
        f(&cur);
        let mut k = 0;
        loop {
            if k == ranges.len() {
                return;
            }
            if cur[k] < ranges[k].1 {
                cur[k] += 1;
                break;
            }
            cur[k] = ranges[k].0;
            k += 1;
        }
    }
}

/// `b1 ≤ b2`: equal Kottwitz points and `ν(b2) − ν(b1)` a nonnegative
/// combination of simple coroots.
pub fn dominance_leq(datum: &RootDatum, b1: &SigmaClass, b2: &SigmaClass) -> bool {
    if b1.kappa != b2.kappa {
        return false;
    }
    match datum.coroot_coords(&(&b2.nu - &b1.nu)) {
        Some(c) => c.iter().all(|x| !x.is_negative()),
        None => false,
    }
}

/// `μ^◇ − ν(b)` strictly positive on every `ω_i`.
pub fn is_hn_irreducible(datum: &RootDatum, mu: &CoVec, b: &SigmaClass) -> Result<bool> {
    let top = top_class(datum, mu)?;
    if !dominance_leq(datum, b, &top) {
        return Err(Error::NotInBGMu(b.to_string()));
    }
    Ok(exponents(datum, mu, &b.nu).iter().all(Signed::is_positive))
}

/// `[ϖ^μ]`: Kottwitz point of `μ` and Newton point `μ^◇`.
pub fn top_class(datum: &RootDatum, mu: &CoVec) -> Result<SigmaClass> {
    require_integral_dominant(datum, mu)?;
    Ok(SigmaClass { kappa: kottwitz_point(datum, mu)?, nu: mu_diamond(datum, mu) })
}

/// Every `(κ(λ), ν)` realised by a representative `ϖ^λ ẇ` with the
/// coordinates of `λ` in `[−bound, bound]`, `w` over all of `W`.
#[derive(Debug, Clone)]
pub struct BruteForceOracle {
    bound: i64,
    classes: HashSet<SigmaClass>,
}

impl BruteForceOracle {
    pub fn new(datum: &RootDatum, bound: i64) -> Self {
        let n = datum.rank();
        let sigma = datum.sigma_lattice();
        // per Weyl element: N = order of wσ and S = Σ_{k<N} (wσ)^k
        let twisted: Vec<(IMat, i64)> = datum
            .weyl_elements()
            .into_iter()
            .map(|w| {
                let m = linalg::mat_mul(&w.matrix, sigma);
                let order = linalg::matrix_order(&m, 10_000).expect("wσ has finite order");
                let mut sum = linalg::identity(n);
                let mut pow = linalg::identity(n);
                for _ in 1..order {
                    pow = linalg::mat_mul(&pow, &m);
                    for a in 0..n {
                        for b in 0..n {
                            sum[a][b] += pow[a][b];
                        }
                    }
                }
                (sum, order as i64)
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let side = (2 * bound + 1) as usize;
        let total = side.pow(n as u32);
        let pres = datum.kottwitz_presentation();
        let keys: HashSet<(Vec<i64>, Vec<i64>)> = (0..total)
            .into_par_iter()
            .fold(HashSet::new, |mut acc, idx| {
                let mut lam = vec![0i64; n];
                let mut t = idx;
                for x in lam.iter_mut() {
                    *x = (t % side) as i64 - bound;
                    t /= side;
                }
                let kappa = pres.class_of(&lam).coords;
                for (sum, order) in &twisted {
                    let mut x = linalg::mat_vec(sum, &lam);
                    datum.make_dominant_int(&mut x);
                    let g = x.iter().fold(*order, |g, &c| g.gcd(&c));
                    x.iter_mut().for_each(|c| *c /= g);
                    x.push(order / g);
                    acc.insert((kappa.clone(), x));
                }
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        let moduli = pres.moduli().to_vec();
        let classes = keys
            .into_iter()
            .map(|(kappa, mut x)| {
                let den = x.pop().unwrap();
                SigmaClass {
                    kappa: KottwitzClass { coords: kappa, moduli: moduli.clone() },
                    nu: CoVec::new(x.into_iter().map(|c| Rational64::new(c, den)).collect()),
                }
            })
            .collect();
        BruteForceOracle { bound, classes }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn classes(&self) -> &HashSet<SigmaClass> {
        &self.classes
    }

    /// Classes with `κ = κ(μ)` and `ν ≤ μ^◇`, maximal element first.
    pub fn bgmu(&self, datum: &RootDatum, mu: &CoVec) -> Result<Vec<SigmaClass>> {
        let top = top_class(datum, mu)?;
        let mut out: Vec<SigmaClass> =
            self.classes.iter().filter(|b| dominance_leq(datum, b, &top)).cloned().collect();
        sort_classes(datum, mu, &mut out);
        Ok(out)
    }
}

/// Default brute-force box: largest coordinate over the `W`-orbit of `μ`, plus one.
pub fn default_bound(datum: &RootDatum, mu: &CoVec) -> i64 {
    datum
        .weyl_elements()
        .iter()
        .map(|w| {
            let v = linalg::mat_vec_q(&w.matrix, mu.coords());
            v.iter().map(|c| c.abs().ceil().to_integer()).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
        + 1
}

/// Independent enumeration of `B(G, μ)` from representatives `ϖ^λ ẇ`.
pub fn brute_force_bgmu(datum: &RootDatum, mu: &CoVec, bound: i64) -> Result<Vec<SigmaClass>> {
    require_integral_dominant(datum, mu)?;
    BruteForceOracle::new(datum, bound).bgmu(datum, mu)
}
