//! Stratum shapes of the Coxeter-type cross-section and the root
//! combinatorics behind them.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::isocrystal::{self, SigmaClass};
use crate::linalg::{self, QMat};
use crate::rational::{self, CoVec};
use crate::rootdata::RootDatum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Valuation exactly `e_i`.
    Circle,
    /// Valuation at least `⌈e_i⌉`.
    Disk,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Circle => "circle",
            Kind::Disk => "disk",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Valuation of one cross-section coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    /// The zero coordinate.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// The set `[b] ∩ ċU_c` described coordinate by coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumShape {
    pub mu: CoVec,
    pub class: SigmaClass,
    /// `e_i = ⟨μ − ν, ω_i⟩`, unreduced.
    pub exponents: Vec<Rational64>,
    pub kinds: Vec<Kind>,
}

impl StratumShape {
    pub fn ceilings(&self) -> Vec<i64> {
        self.exponents.iter().map(|&e| rational::ceil(e)).collect()
    }

    pub fn codim(&self) -> i64 {
        self.ceilings().iter().sum()
    }

    /// Whether a valuation pattern lies in this stratum.
    pub fn contains(&self, v: &[Valuation]) -> bool {
        v.len() == self.exponents.len()
            && v.iter().zip(&self.exponents).zip(&self.kinds).all(|((&v, &e), &k)| match (k, v) {
                (Kind::Circle, Valuation::Finite(x)) => Rational64::from_integer(x) == e,
                (Kind::Circle, Valuation::Infinite) => false,
                (Kind::Disk, Valuation::Finite(x)) => x >= rational::ceil(e),
                (Kind::Disk, Valuation::Infinite) => true,
            })
    }
}

impl Serialize for StratumShape {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            nu: &'a CoVec,
            kappa: &'a [i64],
            #[serde(with = "rational::rat_strings")]
            exponents: Vec<Rational64>,
            kinds: Vec<&'static str>,
            codim: i64,
        }
        Json {
            nu: &self.class.nu,
            kappa: &self.class.kappa.coords,
            exponents: self.exponents.clone(),
            kinds: self.kinds.iter().map(|k| k.as_str()).collect(),
            codim: self.codim(),
        }
        .serialize(s)
    }
}

/// `cσ` on a coefficient vector in the simple roots.
pub fn c_sigma_root_coeffs(datum: &RootDatum, beta: &[i64]) -> Vec<i64> {
    datum.act_root_coeffs(&datum.coxeter_element(), &datum.sigma_root_coeffs(beta))
}

/// `⟨λ, β⟩` for `β` given by simple-root coefficients.
pub fn pair_root_coeffs(datum: &RootDatum, lam: &CoVec, beta: &[i64]) -> Rational64 {
    datum.pair(lam, &datum.root_vector(beta))
}

/// `β_i = σ^{-1} s_{α_r} ⋯ s_{α_{i+1}}(α_i)` over orbit representatives,
/// as simple-root coefficient vectors.
pub fn beta_roots(datum: &RootDatum) -> Vec<Vec<i64>> {
    let reps = datum.orbit_reps();
    let n = datum.semisimple_rank();
    (0..reps.len())
        .map(|i| {
            let mut b: Vec<i64> = (0..n).map(|k| i64::from(k == reps[i])).collect();
            for &j in &reps[i + 1..] {
                b = datum.reflect_root_coeffs(&b, j);
            }
            datum.sigma_inv_root_coeffs(&b)
        })
        .collect()
}

/// Matrix of `cσ` on coroot coefficient vectors.
fn c_sigma_on_coroots(datum: &RootDatum) -> QMat {
    let n = datum.semisimple_rank();
    let cartan = datum.cartan();
    let c = datum.coxeter_element();
    let mut cols: Vec<Vec<Rational64>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut t = vec![0i64; n];
        t[datum.sigma_perm()[k]] = 1;
        // s_j(α_m^∨) = α_m^∨ − ⟨α_m^∨, α_j⟩ α_j^∨
        for &j in c.0.iter().rev() {
            let p: i64 = (0..n).map(|m| t[m] * cartan[m][j]).sum();
            t[j] -= p;
        }
        cols.push(t.into_iter().map(Rational64::from_integer).collect());
    }
    linalg::transpose(&cols)
}

/// The representative in `QΦ^∨` of the solution of `(1 − cσ)λ = μ − ν`.
pub fn solve_lambda(datum: &RootDatum, mu: &CoVec, nu: &CoVec) -> Result<CoVec> {
    let diff = mu - nu;
    let d = datum.coroot_coords(&diff).ok_or_else(|| Error::NotInCorootSpan(diff.to_string()))?;
    let n = d.len();
    let a = c_sigma_on_coroots(datum);
    let m: QMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational64::one() - a[i][j] } else { -a[i][j] })
                .collect()
        })
        .collect();
    let t = linalg::solve_q(&m, &d).expect("1 − cσ is invertible on the coroot span");
    Ok(datum.coroot_vector(&t))
}

/// Shape of `[b] ∩ ċU_c`; errors when the intersection is empty.
pub fn stratum_shape(datum: &RootDatum, mu: &CoVec, b: &SigmaClass) -> Result<StratumShape> {
    let kappa = isocrystal::kottwitz_point(datum, mu)?;
    if kappa != b.kappa {
        return Err(Error::KappaMismatch(format!("{} vs {}", kappa, b.kappa)));
    }
    let exponents = isocrystal::exponents(datum, mu, &b.nu);
    let j = isocrystal::j_set(datum, &b.nu);
    let kinds = (0..datum.orbit_count())
        .map(|i| if j.contains(&i) { Kind::Circle } else { Kind::Disk })
        .collect();
    Ok(StratumShape { mu: mu.clone(), class: b.clone(), exponents, kinds })
}

/// The unique class whose stratum contains the valuation pattern `v`.
pub fn classify_valuation_pattern(datum: &RootDatum, mu: &CoVec, v: &[Valuation]) -> Result<SigmaClass> {
    let r = datum.orbit_count();
    if v.len() != r {
        return Err(Error::Dimension { expected: r, got: v.len() });
    }
    let kappa = isocrystal::kottwitz_point(datum, mu)?;
    let base = isocrystal::mu_diamond(datum, mu);
    let finite: Vec<usize> = (0..r).filter(|&i| v[i].finite().is_some()).collect();
    let mut matches = Vec::new();
    // J must consist of finite coordinates, with e_i pinned to v_i there
    for mask in 0u32..(1 << finite.len()) {
        let mut in_j = vec![false; r];
        let mut pinned = vec![Rational64::zero(); r];
        for (k, &i) in finite.iter().enumerate() {
            if mask & (1 << k) != 0 {
                in_j[i] = true;
                pinned[i] = Rational64::from_integer(v[i].finite().unwrap());
            }
        }
        let Some((nu, e)) = isocrystal::solve_orbit_system(datum, &base, &in_j, &pinned) else {
            continue;
        };
        let ok = (0..r).all(|i| {
            if in_j[i] {
                datum.pair_simple_root(&nu, datum.orbit_reps()[i]).is_positive()
            } else {
                match v[i] {
                    Valuation::Finite(x) => rational::ceil(e[i]) <= x,
                    Valuation::Infinite => true,
                }
            }
        });
        if ok {
            matches.push(SigmaClass { kappa: kappa.clone(), nu });
        }
    }
    if matches.len() == 1 {
        Ok(matches.pop().unwrap())
    } else {
        Err(Error::Unclassified { matches: matches.len() })
    }
}

/// `m_i = −n_i − Σ_{j>i} n_j ⟨α_j^∨, α_i⟩` over orbit representatives.
pub fn k_xi_exponents(datum: &RootDatum, n: &[i64]) -> Result<Vec<i64>> {
    let r = datum.orbit_count();
    if n.len() != r {
        return Err(Error::Dimension { expected: r, got: n.len() });
    }
    let reps = datum.orbit_reps();
    let cartan = datum.cartan();
    Ok((0..r)
        .map(|i| -n[i] - (i + 1..r).map(|j| n[j] * cartan[reps[j]][reps[i]]).sum::<i64>())
        .collect())
}

/// The cocharacter `η` with `μ − η ∈ Σ Z α_i^∨` (orbit representatives) and
/// `χ − η ∈ (1 − σ)X_*`.
pub fn decompose_eta(datum: &RootDatum, mu: &CoVec, chi: &CoVec) -> Result<CoVec> {
    let k_mu = isocrystal::kottwitz_point(datum, mu)?;
    let k_chi = isocrystal::kottwitz_point(datum, chi)?;
    if k_mu != k_chi {
        return Err(Error::KappaMismatch(format!("{k_mu} vs {k_chi}")));
    }
    let n = datum.rank();
    let reps = datum.orbit_reps();
    let sigma = datum.sigma_lattice();
    // Σ n_i α_i^∨ − (1 − σ) y = μ − χ
    let a: Vec<Vec<i64>> = (0..n)
        .map(|row| {
            let mut line: Vec<i64> = reps.iter().map(|&i| datum.simple_coroots()[i][row]).collect();
            line.extend((0..n).map(|k| sigma[row][k] - i64::from(row == k)));
            line
        })
        .collect();
    let rhs = (mu - chi).to_ints().expect("integral inputs");
    let x = linalg::solve_z(&a, &rhs).expect("κ agreement makes the system solvable");
    let mut eta = mu.clone();
    for (k, &i) in reps.iter().enumerate() {
        eta = &eta - &datum.simple_coroot(i).scale(Rational64::from_integer(x[k]));
    }
    Ok(eta)
}

/// Whether `eta` satisfies both lattice conditions of [`decompose_eta`].
pub fn eta_conditions_hold(datum: &RootDatum, mu: &CoVec, chi: &CoVec, eta: &CoVec) -> bool {
    let n = datum.rank();
    let (Some(d1), Some(d2)) = ((mu - eta).to_ints(), (chi - eta).to_ints()) else {
        return false;
    };
    let coroots: Vec<Vec<i64>> = (0..n)
        .map(|row| datum.orbit_reps().iter().map(|&i| datum.simple_coroots()[i][row]).collect())
        .collect();
    let sigma = datum.sigma_lattice();
    let one_minus: Vec<Vec<i64>> =
        (0..n).map(|a| (0..n).map(|b| i64::from(a == b) - sigma[a][b]).collect()).collect();
    let in_span = |m: &Vec<Vec<i64>>, v: &[i64]| {
        if m.first().is_none_or(Vec::is_empty) {
            v.iter().all(|&x| x == 0)
        } else {
            linalg::solve_z(m, v).is_some()
        }
    };
    in_span(&coroots, &d1) && in_span(&one_minus, &d2)
}

/// `Φ^+ ∩ cσ(Z_{≥1}γ + Z_{≥0}Φ^+_{cσ})`, united over `gamma_set`.
pub fn cross_operator(datum: &RootDatum, gamma_set: &BTreeSet<Vec<i64>>) -> Result<BTreeSet<Vec<i64>>> {
    if let Some(bad) = gamma_set.iter().find(|g| !datum.is_positive_root(g)) {
        return Err(Error::NotPositiveRoot(bad.clone()));
    }
    let betas = beta_roots(datum);
    let heights: Vec<i64> = betas.iter().map(|b| b.iter().sum()).collect();
    let top = datum.max_height();
    let mut out = BTreeSet::new();
    for gamma in gamma_set {
        let hg: i64 = gamma.iter().sum();
        let mut a = 1;
        while a * hg <= top {
            let start: Vec<i64> = gamma.iter().map(|c| a * c).collect();
            cone_search(datum, &betas, &heights, 0, start, top - a * hg, &mut out);
            a += 1;
        }
    }
    Ok(out)
}

fn cone_search(
    datum: &RootDatum,
    betas: &[Vec<i64>],
    heights: &[i64],
    k: usize,
    acc: Vec<i64>,
    budget: i64,
    out: &mut BTreeSet<Vec<i64>>,
) {
    if k == betas.len() {
        if datum.is_root(&acc) {
            let img = c_sigma_root_coeffs(datum, &acc);
            if datum.is_positive_root(&img) {
                out.insert(img);
            }
        }
        return;
    }
    let mut cur = acc;
    let mut left = budget;
    loop {
        cone_search(datum, betas, heights, k + 1, cur.clone(), left, out);
        if heights[k] > left {
            break;
        }
        left -= heights[k];
        for (c, b) in cur.iter_mut().zip(&betas[k]) {
            *c += b;
        }
    }
}

/// Least `d` with `Cross^d(Φ^+) = ∅`.
pub fn cross_nilpotence_depth(datum: &RootDatum) -> Result<usize> {
    let mut cur: BTreeSet<Vec<i64>> = datum.positive_roots().iter().cloned().collect();
    let cap = cur.len() + 1;
    for d in 1..=cap {
        cur = cross_operator(datum, &cur)?;
        if cur.is_empty() {
            return Ok(d);
        }
    }
    Err(Error::IterationCap(cap))
}
