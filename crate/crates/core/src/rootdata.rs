//! Based root data with a diagram automorphism.
//!
//! A [`RootDatum`] carries explicit integer coordinates for the cocharacter
//! lattice `X_* = Z^n` and the character lattice `X^* = Z^n`, the simple
//! roots and coroots, the pairing matrix, and the action of the Frobenius
//! twist `σ` on both the simple roots (a permutation) and on `X_*` (a
//! finite-order integer matrix). Simple roots are numbered as in Bourbaki;
//! all indices in the API are 0-based and printed 1-based.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isocrystal::KottwitzPresentation;
use crate::linalg::{self, IMat};
use crate::rational::{ChVec, CoVec};

const MAX_ROOTS: usize = 2000;
const MAX_SIGMA_ORDER: usize = 24;

/// A Weyl group element as a word in simple reflections (0-based indices).
///
/// The word `[i1, …, ik]` acts as `s_{i1} ∘ ⋯ ∘ s_{ik}`, rightmost first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word `self · other`.
    pub fn compose(&self, other: &WeylWord) -> WeylWord {
        WeylWord(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A Weyl group element together with its matrix on `X_*`.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub matrix: IMat,
    pub word: WeylWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Isogeny {
    SimplyConnected,
    Adjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetKind {
    /// `GL_n` in the standard coordinates of `Z^n`.
    GeneralLinear(usize),
    Semisimple {
        family: Family,
        rank: usize,
        isogeny: Isogeny,
    },
}

/// Preset name, isogeny flavour and twist order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PresetSpec {
    pub kind: PresetKind,
    /// Order of the diagram automorphism; 1 means split.
    pub twist: u8,
}

impl FromStr for PresetSpec {
    type Err = Error;

    /// Accepted forms: `GL3`, `SL4`, `PGL2`, `B3`, `B3_ad`, `B3_sc`,
    /// `2A2`, `2A3_ad`, `2D4`, `3D4`, `G2`, `F4`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownPreset(s.to_string());
        let (twist, rest) = match s.as_bytes().first() {
            Some(b'2') => (2u8, &s[1..]),
            Some(b'3') => (3u8, &s[1..]),
            _ => (1u8, s),
        };
        let parse_n = |t: &str| t.parse::<usize>().map_err(|_| unknown());
        let kind = if let Some(n) = rest.strip_prefix("PGL") {
            let n = parse_n(n)?;
            if n < 2 {
                return Err(unknown());
            }
            PresetKind::Semisimple { family: Family::A, rank: n - 1, isogeny: Isogeny::Adjoint }
        } else if let Some(n) = rest.strip_prefix("SL") {
            let n = parse_n(n)?;
            if n < 2 {
                return Err(unknown());
            }
            PresetKind::Semisimple { family: Family::A, rank: n - 1, isogeny: Isogeny::SimplyConnected }
        } else if let Some(n) = rest.strip_prefix("GL") {
            let n = parse_n(n)?;
            if n < 1 {
                return Err(unknown());
            }
            PresetKind::GeneralLinear(n)
        } else {
            let (body, isogeny) = if let Some(b) = rest.strip_suffix("_ad") {
                (b, Isogeny::Adjoint)
            } else if let Some(b) = rest.strip_suffix("_sc") {
                (b, Isogeny::SimplyConnected)
            } else {
                (rest, Isogeny::SimplyConnected)
            };
            let family = match body.chars().next() {
                Some('A') => Family::A,
                Some('B') => Family::B,
                Some('C') => Family::C,
                Some('D') => Family::D,
                Some('F') => Family::F,
                Some('G') => Family::G,
                _ => return Err(unknown()),
            };
            let rank = parse_n(&body[1..])?;
            PresetKind::Semisimple { family, rank, isogeny }
        };
        Ok(PresetSpec { kind, twist })
    }
}

/// The preset names exercised by the test and acceptance suites.
pub const PRESET_CATALOGUE: &[&str] = &[
    "GL1", "GL2", "GL3", "GL4", "SL2", "SL3", "SL4", "SL5", "PGL2", "PGL3", "PGL4", "A1", "A2",
    "A3", "A4", "A1_ad", "A2_ad", "A3_ad", "A4_ad", "B2", "B3", "B4", "B2_ad", "B3_ad", "B4_ad",
    "C2", "C3", "C4", "C2_ad", "C3_ad", "C4_ad", "D4", "D4_ad", "G2", "F4", "2A2", "2A3", "2A4",
    "2A2_ad", "2A3_ad", "2A4_ad", "2D4", "2D4_ad", "3D4", "3D4_ad",
];

/// Kac-convention Cartan matrix `a[i][j] = ⟨α_i^∨, α_j⟩`, Bourbaki numbering.
fn cartan_matrix(family: Family, rank: usize) -> Result<IMat> {
    let bad = || Error::UnknownPreset(format!("{family:?}{rank}"));
    let ok = match family {
        Family::A => (1..=4).contains(&rank),
        Family::B | Family::C => (2..=4).contains(&rank),
        Family::D => rank == 4,
        Family::F => rank == 4,
        Family::G => rank == 2,
    };
    if !ok {
        return Err(bad());
    }
    let mut a = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        a[i][i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match family {
        Family::A | Family::B | Family::C => {
            for i in 0..rank - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            // α_2 is the branch node
            link(0, 1);
            link(1, 2);
            link(1, 3);
        }
        Family::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Family::G => link(0, 1),
    }
    match family {
        // α_ℓ short
        Family::B => a[rank - 1][rank - 2] = -2,
        // α_ℓ long
        Family::C => a[rank - 2][rank - 1] = -2,
        // α_1, α_2 long; α_3, α_4 short
        Family::F => a[2][1] = -2,
        // α_1 short
        Family::G => a[0][1] = -3,
        _ => {}
    }
    Ok(a)
}

fn twist_permutation(family: Family, rank: usize, twist: u8) -> Result<Vec<usize>> {
    let id: Vec<usize> = (0..rank).collect();
    let incompatible = || Error::IncompatibleTwist(format!("order {twist} on {family:?}{rank}"));
    match (twist, family) {
        (1, _) => Ok(id),
        (2, Family::A) if rank >= 2 => Ok((0..rank).map(|i| rank - 1 - i).collect()),
        (2, Family::D) => Ok(vec![0, 1, 3, 2]),
        // α_1 → α_3 → α_4 → α_1
        (3, Family::D) => Ok(vec![2, 1, 3, 0]),
        _ => Err(incompatible()),
    }
}

/// Builds the root datum of a preset.
pub fn build_root_datum(spec: &PresetSpec) -> Result<RootDatum> {
    match spec.kind {
        PresetKind::GeneralLinear(n) => {
            if spec.twist != 1 {
                return Err(Error::IncompatibleTwist(format!(
                    "order {} twist on GL{n} is not a supported preset",
                    spec.twist
                )));
            }
            let roots: IMat = (0..n.saturating_sub(1))
                .map(|i| (0..n).map(|k| i64::from(k == i) - i64::from(k == i + 1)).collect())
                .collect();
            RootDatum::new(
                format!("GL{n}"),
                n,
                roots.clone(),
                roots,
                linalg::identity(n),
                (0..n.saturating_sub(1)).collect(),
                linalg::identity(n),
                (0..n.saturating_sub(1)).collect(),
            )
        }
        PresetKind::Semisimple { family, rank, isogeny } => {
            let a = cartan_matrix(family, rank)?;
            let perm = twist_permutation(family, rank, spec.twist)?;
            let (roots, coroots) = match isogeny {
                // X_* spanned by the simple coroots
                Isogeny::SimplyConnected => {
                    let coroots = linalg::identity(rank);
                    let roots = (0..rank).map(|i| (0..rank).map(|k| a[k][i]).collect()).collect();
                    (roots, coroots)
                }
                // X^* spanned by the simple roots
                Isogeny::Adjoint => (linalg::identity(rank), a.clone()),
            };
            let mut sigma = vec![vec![0i64; rank]; rank];
            for (j, &sj) in perm.iter().enumerate() {
                sigma[sj][j] = 1;
            }
            let reps = orbit_representatives(&perm);
            let mut name = String::new();
            if spec.twist != 1 {
                name.push_str(&spec.twist.to_string());
            }
            name.push_str(&format!("{family:?}{rank}"));
            if isogeny == Isogeny::Adjoint {
                name.push_str("_ad");
            }
            RootDatum::new(name, rank, roots, coroots, linalg::identity(rank), perm, sigma, reps)
        }
    }
}

/// Parses and builds a preset by name.
pub fn preset(name: &str) -> Result<RootDatum> {
    let spec: PresetSpec = name.parse()?;
    let mut d = build_root_datum(&spec)?;
    d.name = name.to_string();
    Ok(d)
}

fn orbit_representatives(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut reps = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        reps.push(start);
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
        }
    }
    reps
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawDatum {
    name: String,
    rank: usize,
    simple_roots: IMat,
    simple_coroots: IMat,
    pairing_matrix: IMat,
    sigma_perm: Vec<usize>,
    sigma_lattice: IMat,
    orbit_reps: Vec<usize>,
}

/// Based root datum with twist. Immutable once built.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawDatum", into = "RawDatum")]
pub struct RootDatum {
    name: String,
    rank: usize,
    simple_roots: IMat,
    simple_coroots: IMat,
    pairing_matrix: IMat,
    sigma_perm: Vec<usize>,
    sigma_lattice: IMat,
    orbit_reps: Vec<usize>,

    /// `cartan[j][i] = ⟨α_j^∨, α_i⟩`
    cartan: IMat,
    sigma_order: usize,
    sigma_inverse: IMat,
    /// σ on `X^*`, determined by `⟨σx, σy⟩ = ⟨x, y⟩`
    sigma_dual: IMat,
    /// all roots as coefficient vectors in the simple roots
    roots: Vec<Vec<i64>>,
    root_set: HashSet<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    /// fundamental weights `ω_α ∈ QΦ` as coefficient vectors in the simple roots
    fundamental_weights: Vec<Vec<Rational64>>,
    orbit_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    kottwitz: KottwitzPresentation,
}

impl TryFrom<RawDatum> for RootDatum {
    type Error = Error;
    fn try_from(r: RawDatum) -> Result<Self> {
        RootDatum::new(
            r.name,
            r.rank,
            r.simple_roots,
            r.simple_coroots,
            r.pairing_matrix,
            r.sigma_perm,
            r.sigma_lattice,
            r.orbit_reps,
        )
    }
}

impl From<RootDatum> for RawDatum {
    fn from(d: RootDatum) -> Self {
        RawDatum {
            name: d.name,
            rank: d.rank,
            simple_roots: d.simple_roots,
            simple_coroots: d.simple_coroots,
            pairing_matrix: d.pairing_matrix,
            sigma_perm: d.sigma_perm,
            sigma_lattice: d.sigma_lattice,
            orbit_reps: d.orbit_reps,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDatum(msg.into())
}

impl RootDatum {
    /// Validates the raw data and precomputes roots, weights and the
    /// Kottwitz presentation.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: String,
        rank: usize,
        simple_roots: IMat,
        simple_coroots: IMat,
        pairing_matrix: IMat,
        sigma_perm: Vec<usize>,
        sigma_lattice: IMat,
        orbit_reps: Vec<usize>,
    ) -> Result<Self> {
        let ell = simple_roots.len();
        let square = |m: &IMat| m.len() == rank && m.iter().all(|r| r.len() == rank);
        if simple_coroots.len() != ell
            || simple_roots.iter().chain(&simple_coroots).any(|v| v.len() != rank)
        {
            return Err(invalid("root and coroot vectors must have length rank"));
        }
        if !square(&pairing_matrix) || !square(&sigma_lattice) {
            return Err(invalid("pairing and sigma matrices must be rank x rank"));
        }
        if sigma_perm.len() != ell || {
            let mut s = sigma_perm.clone();
            s.sort_unstable();
            s != (0..ell).collect::<Vec<_>>()
        } {
            return Err(invalid("sigma_perm is not a permutation of the simple roots"));
        }

        let pair = |x: &[i64], y: &[i64]| -> i64 {
            (0..rank)
                .map(|a| (0..rank).map(|b| x[a] * pairing_matrix[a][b] * y[b]).sum::<i64>())
                .sum()
        };
        let cartan: IMat = (0..ell)
            .map(|j| (0..ell).map(|i| pair(&simple_coroots[j], &simple_roots[i])).collect())
            .collect();
        for j in 0..ell {
            if cartan[j][j] != 2 {
                return Err(invalid(format!("⟨α_{0}^∨, α_{0}⟩ ≠ 2", j + 1)));
            }
            for i in 0..ell {
                if i != j && (cartan[j][i] > 0 || (cartan[j][i] == 0) != (cartan[i][j] == 0)) {
                    return Err(invalid("Cartan integers do not form a generalized Cartan matrix"));
                }
            }
        }

        let sigma_order = linalg::matrix_order(&sigma_lattice, MAX_SIGMA_ORDER)
            .ok_or_else(|| invalid("sigma_lattice does not have finite order"))?;
        let mut sigma_inverse = linalg::identity(rank);
        for _ in 1..sigma_order {
            sigma_inverse = linalg::mat_mul(&sigma_inverse, &sigma_lattice);
        }
        for j in 0..ell {
            if linalg::mat_vec(&sigma_lattice, &simple_coroots[j]) != simple_coroots[sigma_perm[j]] {
                return Err(invalid(format!("sigma_lattice does not send α_{}^∨ to α_{}^∨", j + 1, sigma_perm[j] + 1)));
            }
        }
        // σ on X^*: P^{-1} (σ^{-1})^T P
        let p_inv = linalg::inverse_q(&linalg::to_q(&pairing_matrix))
            .ok_or_else(|| invalid("pairing matrix is singular"))?;
        let prod = linalg::mat_mul(&linalg::transpose(&sigma_inverse), &pairing_matrix);
        let mut sigma_dual = vec![vec![0i64; rank]; rank];
        for a in 0..rank {
            for b in 0..rank {
                let v: Rational64 = (0..rank)
                    .map(|k| p_inv[a][k] * Rational64::from_integer(prod[k][b]))
                    .sum();
                if !v.is_integer() {
                    return Err(invalid("pairing matrix is not unimodular for sigma"));
                }
                sigma_dual[a][b] = v.to_integer();
            }
        }
        for x in linalg::identity(rank) {
            for y in linalg::identity(rank) {
                let sx = linalg::mat_vec(&sigma_lattice, &x);
                let sy = linalg::mat_vec(&sigma_dual, &y);
                if pair(&sx, &sy) != pair(&x, &y) {
                    return Err(invalid("sigma does not preserve the pairing"));
                }
            }
        }
        for i in 0..ell {
            if linalg::mat_vec(&sigma_dual, &simple_roots[i]) != simple_roots[sigma_perm[i]] {
                return Err(invalid("sigma on X^* does not permute the simple roots"));
            }
        }

        // orbits
        let mut orbit_of = vec![usize::MAX; ell];
        let mut orbits = Vec::new();
        for (k, &rep) in orbit_reps.iter().enumerate() {
            if rep >= ell || orbit_of[rep] != usize::MAX {
                return Err(invalid("orbit_reps must list distinct simple-root indices"));
            }
            let mut orbit = Vec::new();
            let mut j = rep;
            loop {
                if orbit_of[j] != usize::MAX {
                    return Err(invalid("two orbit representatives share an orbit"));
                }
                orbit_of[j] = k;
                orbit.push(j);
                j = sigma_perm[j];
                if j == rep {
                    break;
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        if orbit_of.contains(&usize::MAX) {
            return Err(invalid("orbit_reps misses a sigma-orbit"));
        }

        // roots, by reflecting the simple roots
        let mut root_set: HashSet<Vec<i64>> = HashSet::new();
        let mut roots = Vec::new();
        let mut queue: VecDeque<Vec<i64>> = (0..ell)
            .map(|i| (0..ell).map(|k| i64::from(k == i)).collect())
            .collect();
        while let Some(beta) = queue.pop_front() {
            if !root_set.insert(beta.clone()) {
                continue;
            }
            if root_set.len() > MAX_ROOTS {
                return Err(invalid("root system is not of finite type"));
            }
            for j in 0..ell {
                let p: i64 = (0..ell).map(|k| beta[k] * cartan[j][k]).sum();
                let mut next = beta.clone();
                next[j] -= p;
                if !root_set.contains(&next) {
                    queue.push_back(next);
                }
            }
            roots.push(beta);
        }
        if roots.iter().any(|b| b.iter().any(|&x| x > 0) && b.iter().any(|&x| x < 0)) {
            return Err(invalid("a root has coefficients of mixed sign"));
        }
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let positive_roots: Vec<Vec<i64>> =
            roots.iter().filter(|b| b.iter().all(|&x| x >= 0)).cloned().collect();

        let cartan_q = linalg::to_q(&cartan);
        let fundamental_weights = (0..ell)
            .map(|a| {
                let e: Vec<Rational64> =
                    (0..ell).map(|j| Rational64::from_integer(i64::from(j == a))).collect();
                linalg::solve_q(&cartan_q, &e)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| invalid("Cartan matrix is singular"))?;

        let kottwitz = KottwitzPresentation::new(rank, &simple_coroots, &sigma_lattice);

        Ok(RootDatum {
            name,
            rank,
            simple_roots,
            simple_coroots,
            pairing_matrix,
            sigma_perm,
            sigma_lattice,
            orbit_reps,
            cartan,
            sigma_order,
            sigma_inverse,
            sigma_dual,
            roots,
            root_set,
            positive_roots,
            fundamental_weights,
            orbit_of,
            orbits,
            kottwitz,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dimension `n` of `X_*`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number `ℓ` of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Number `r` of σ-orbits of simple roots.
    pub fn orbit_count(&self) -> usize {
        self.orbit_reps.len()
    }

    pub fn simple_roots(&self) -> &IMat {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &IMat {
        &self.simple_coroots
    }

    pub fn pairing_matrix(&self) -> &IMat {
        &self.pairing_matrix
    }

    pub fn sigma_perm(&self) -> &[usize] {
        &self.sigma_perm
    }

    pub fn sigma_lattice(&self) -> &IMat {
        &self.sigma_lattice
    }

    pub fn sigma_order(&self) -> usize {
        self.sigma_order
    }

    pub fn orbit_reps(&self) -> &[usize] {
        &self.orbit_reps
    }

    /// `cartan()[j][i] = ⟨α_j^∨, α_i⟩`.
    pub fn cartan(&self) -> &IMat {
        &self.cartan
    }

    pub fn kottwitz_presentation(&self) -> &KottwitzPresentation {
        &self.kottwitz
    }

    /// Index of the σ-orbit containing simple root `j`.
    pub fn orbit_of(&self, j: usize) -> usize {
        self.orbit_of[j]
    }

    pub fn is_split(&self) -> bool {
        self.sigma_perm.iter().enumerate().all(|(i, &j)| i == j)
            && self.sigma_lattice == linalg::identity(self.rank)
    }

    // --- pairings and lattice vectors -----------------------------------

    pub fn pair_int(&self, x: &[i64], y: &[i64]) -> i64 {
        let p = &self.pairing_matrix;
        (0..self.rank)
            .map(|a| (0..self.rank).map(|b| x[a] * p[a][b] * y[b]).sum::<i64>())
            .sum()
    }

    pub fn pair(&self, x: &CoVec, y: &ChVec) -> Rational64 {
        let (x, y) = (x.coords(), y.coords());
        let p = &self.pairing_matrix;
        let mut acc = Rational64::zero();
        for a in 0..self.rank {
            for b in 0..self.rank {
                if p[a][b] != 0 && !x[a].is_zero() && !y[b].is_zero() {
                    acc += x[a] * y[b] * p[a][b];
                }
            }
        }
        acc
    }

    /// `⟨x, α_j⟩` for a simple root.
    pub fn pair_simple_root(&self, x: &CoVec, j: usize) -> Rational64 {
        self.pair(x, &ChVec::from_ints(&self.simple_roots[j]))
    }

    pub fn simple_root(&self, j: usize) -> ChVec {
        ChVec::from_ints(&self.simple_roots[j])
    }

    pub fn simple_coroot(&self, j: usize) -> CoVec {
        CoVec::from_ints(&self.simple_coroots[j])
    }

    /// `Σ c_k α_k` for a coefficient vector in the simple roots.
    pub fn root_vector<T: Into<Rational64> + Copy>(&self, coeffs: &[T]) -> ChVec {
        let mut v = vec![Rational64::zero(); self.rank];
        for (k, &c) in coeffs.iter().enumerate() {
            let c: Rational64 = c.into();
            for a in 0..self.rank {
                v[a] += c * self.simple_roots[k][a];
            }
        }
        ChVec::new(v)
    }

    /// `Σ c_k α_k^∨` for a coefficient vector in the simple coroots.
    pub fn coroot_vector<T: Into<Rational64> + Copy>(&self, coeffs: &[T]) -> CoVec {
        let mut v = vec![Rational64::zero(); self.rank];
        for (k, &c) in coeffs.iter().enumerate() {
            let c: Rational64 = c.into();
            for a in 0..self.rank {
                v[a] += c * self.simple_coroots[k][a];
            }
        }
        CoVec::new(v)
    }

    /// Coordinates of `v` in the simple coroots, or `None` if `v ∉ QΦ^∨`.
    pub fn coroot_coords(&self, v: &CoVec) -> Option<Vec<Rational64>> {
        let c: Vec<Rational64> = (0..self.semisimple_rank())
            .map(|j| self.pair(v, &self.fundamental_weight(j)))
            .collect();
        (self.coroot_vector(&c) == *v).then_some(c)
    }

    // --- roots ----------------------------------------------------------

    /// All roots as coefficient vectors in the simple roots, sorted by height.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    /// Positive roots as coefficient vectors, sorted by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn is_root(&self, coeffs: &[i64]) -> bool {
        self.root_set.contains(coeffs)
    }

    pub fn is_positive_root(&self, coeffs: &[i64]) -> bool {
        self.is_root(coeffs) && coeffs.iter().all(|&c| c >= 0)
    }

    /// Height of the highest root.
    pub fn max_height(&self) -> i64 {
        self.positive_roots.iter().map(|b| b.iter().sum()).max().unwrap_or(0)
    }

    /// `s_j` on a coefficient vector of a character in `ZΦ`.
    pub fn reflect_root_coeffs(&self, beta: &[i64], j: usize) -> Vec<i64> {
        let p: i64 = beta.iter().zip(&self.cartan[j]).map(|(b, c)| b * c).sum();
        let mut out = beta.to_vec();
        out[j] -= p;
        out
    }

    pub fn sigma_root_coeffs(&self, beta: &[i64]) -> Vec<i64> {
        let mut out = vec![0; beta.len()];
        for (k, &b) in beta.iter().enumerate() {
            out[self.sigma_perm[k]] = b;
        }
        out
    }

    pub fn sigma_inv_root_coeffs(&self, beta: &[i64]) -> Vec<i64> {
        (0..beta.len()).map(|k| beta[self.sigma_perm[k]]).collect()
    }

    /// Word action on root coefficient vectors, rightmost letter first.
    pub fn act_root_coeffs(&self, w: &WeylWord, beta: &[i64]) -> Vec<i64> {
        w.0.iter().rev().fold(beta.to_vec(), |b, &j| self.reflect_root_coeffs(&b, j))
    }

    // --- Weyl group and σ on X_* ---------------------------------------

    /// Matrix of `s_j` on `X_*`.
    pub fn reflection_matrix(&self, j: usize) -> IMat {
        let n = self.rank;
        let alpha = &self.simple_roots[j];
        let coroot = &self.simple_coroots[j];
        // s_j(e_b) = e_b − ⟨e_b, α_j⟩ α_j^∨
        let mut m = linalg::identity(n);
        for b in 0..n {
            let e: Vec<i64> = (0..n).map(|k| i64::from(k == b)).collect();
            let p = self.pair_int(&e, alpha);
            for a in 0..n {
                m[a][b] -= p * coroot[a];
            }
        }
        m
    }

    /// Matrix of the word on `X_*`.
    pub fn word_matrix(&self, w: &WeylWord) -> IMat {
        w.0.iter()
            .fold(linalg::identity(self.rank), |acc, &j| linalg::mat_mul(&acc, &self.reflection_matrix(j)))
    }

    pub fn reflect_co(&self, x: &CoVec, j: usize) -> CoVec {
        let p = self.pair_simple_root(x, j);
        x - &self.simple_coroot(j).scale(p)
    }

    pub fn act_co(&self, w: &WeylWord, x: &CoVec) -> CoVec {
        w.0.iter().rev().fold(x.clone(), |v, &j| self.reflect_co(&v, j))
    }

    pub fn sigma_co(&self, x: &CoVec) -> CoVec {
        CoVec::new(linalg::mat_vec_q(&self.sigma_lattice, x.coords()))
    }

    pub fn sigma_inv_co(&self, x: &CoVec) -> CoVec {
        CoVec::new(linalg::mat_vec_q(&self.sigma_inverse, x.coords()))
    }

    pub fn sigma_ch(&self, y: &ChVec) -> ChVec {
        ChVec::new(linalg::mat_vec_q(&self.sigma_dual, y.coords()))
    }

    /// The σ-average `x^◇ = (1/N) Σ σ^k(x)`.
    pub fn sigma_average(&self, x: &CoVec) -> CoVec {
        let mut acc = x.clone();
        let mut cur = x.clone();
        for _ in 1..self.sigma_order {
            cur = self.sigma_co(&cur);
            acc = &acc + &cur;
        }
        acc.scale(Rational64::new(1, self.sigma_order as i64))
    }

    /// All Weyl group elements, each with one reduced-length word, in BFS order.
    pub fn weyl_elements(&self) -> Vec<WeylElement> {
        let gens: Vec<IMat> = (0..self.semisimple_rank()).map(|j| self.reflection_matrix(j)).collect();
        let id = linalg::identity(self.rank);
        let mut seen: HashMap<IMat, usize> = HashMap::new();
        let mut out = vec![WeylElement { matrix: id.clone(), word: WeylWord::identity() }];
        seen.insert(id, 0);
        let mut head = 0;
        while head < out.len() {
            for (j, g) in gens.iter().enumerate() {
                let m = linalg::mat_mul(g, &out[head].matrix);
                if !seen.contains_key(&m) {
                    let word = WeylWord(vec![j]).compose(&out[head].word);
                    seen.insert(m.clone(), out.len());
                    out.push(WeylElement { matrix: m, word });
                }
            }
            head += 1;
        }
        out
    }

    pub fn is_dominant(&self, x: &CoVec) -> bool {
        (0..self.semisimple_rank()).all(|j| !self.pair_simple_root(x, j).is_negative())
    }

    /// The dominant `W`-conjugate `v'` of `v` and a word `w` with `w·v = v'`.
    pub fn dominant_representative(&self, v: &CoVec) -> (CoVec, WeylWord) {
        let den = v.denominator();
        let mut x: Vec<i64> = v.coords().iter().map(|c| (c * den).to_integer()).collect();
        let mut applied = Vec::new();
        while let Some(j) = (0..self.semisimple_rank()).find(|&j| self.pair_int(&x, &self.simple_roots[j]) < 0) {
            let p = self.pair_int(&x, &self.simple_roots[j]);
            for a in 0..self.rank {
                x[a] -= p * self.simple_coroots[j][a];
            }
            applied.push(j);
        }
        applied.reverse();
        let out = CoVec::new(x.iter().map(|&c| Rational64::new(c, den)).collect());
        (out, WeylWord(applied))
    }

    /// Dominant conjugate of an integer vector, in place.
    pub(crate) fn make_dominant_int(&self, x: &mut [i64]) {
        while let Some((j, p)) = (0..self.semisimple_rank())
            .map(|j| (j, self.pair_int(x, &self.simple_roots[j])))
            .find(|&(_, p)| p < 0)
        {
            for a in 0..self.rank {
                x[a] -= p * self.simple_coroots[j][a];
            }
        }
    }

    // --- σ-orbits, Coxeter element, weights ------------------------------

    /// The σ-orbits of simple roots, ordered by `orbit_reps`.
    pub fn sigma_orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// `c = s_{α_1} ⋯ s_{α_r}` over the orbit representatives.
    pub fn coxeter_element(&self) -> WeylWord {
        WeylWord(self.orbit_reps.clone())
    }

    /// Fundamental weight `ω_α` for simple root `a`, inside `QΦ`.
    pub fn fundamental_weight(&self, a: usize) -> ChVec {
        self.root_vector(&self.fundamental_weights[a])
    }

    pub fn fundamental_weight_coeffs(&self, a: usize) -> &[Rational64] {
        &self.fundamental_weights[a]
    }

    /// `ω_i = Σ ω_α` over the σ-orbit of `α_i`.
    pub fn orbit_weight(&self, i: usize) -> Result<ChVec> {
        let orbit = self
            .orbits
            .get(i)
            .ok_or(Error::IndexOutOfRange { index: i, limit: self.orbits.len() })?;
        let mut coeffs = vec![Rational64::zero(); self.semisimple_rank()];
        for &a in orbit {
            for (c, w) in coeffs.iter_mut().zip(&self.fundamental_weights[a]) {
                *c += w;
            }
        }
        Ok(self.root_vector(&coeffs))
    }

    /// `Σ_{α ∈ orbit i} α^∨`.
    pub fn orbit_coroot(&self, i: usize) -> CoVec {
        let mut coeffs = vec![0i64; self.semisimple_rank()];
        for &a in &self.orbits[i] {
            coeffs[a] = 1;
        }
        self.coroot_vector(&coeffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("root datum serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn d(name: &str) -> RootDatum {
        preset(name).unwrap()
    }

    #[test]
    fn gl2_coordinates() {
        let g = d("GL2");
        assert_eq!(g.rank(), 2);
        assert_eq!(g.simple_roots(), &vec![vec![1, -1]]);
        assert_eq!(g.simple_coroots(), &vec![vec![1, -1]]);
        assert_eq!(g.orbit_count(), 1);
        assert!(g.is_split());
    }

    #[test]
    fn gl3_coordinates() {
        let g = d("GL3");
        assert_eq!(g.rank(), 3);
        assert_eq!(g.simple_roots(), &vec![vec![1, -1, 0], vec![0, 1, -1]]);
        assert_eq!(g.orbit_count(), 2);
    }

    #[test]
    fn twisted_a2_flip() {
        let g = d("2A2");
        assert_eq!(g.semisimple_rank(), 2);
        assert_eq!(g.sigma_perm(), &[1, 0]);
        assert_eq!(g.orbit_count(), 1);
        assert_eq!(g.sigma_orbits(), &[vec![0, 1]]);
    }

    #[test]
    fn orbits_of_triality() {
        let g = d("3D4");
        assert_eq!(g.sigma_orbits(), &[vec![0, 2, 3], vec![1]]);
        assert_eq!(d("GL3").sigma_orbits(), &[vec![0], vec![1]]);
        assert_eq!(g.sigma_order(), 3);
    }

    #[test]
    fn unknown_and_incompatible_presets() {
        assert!(matches!(preset("E6"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("GLx"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("B5"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("2B3"), Err(Error::IncompatibleTwist(_))));
        assert!(matches!(preset("2A1"), Err(Error::IncompatibleTwist(_))));
        assert!(matches!(preset("3A3"), Err(Error::IncompatibleTwist(_))));
        assert!(matches!(preset("2GL3"), Err(Error::IncompatibleTwist(_))));
    }

    #[test]
    fn positive_root_counts() {
        for (name, n) in [
            ("A1", 1),
            ("A3", 6),
            ("A4_ad", 10),
            ("B2", 4),
            ("B3", 9),
            ("C4_ad", 16),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("GL4", 6),
        ] {
            assert_eq!(d(name).positive_roots().len(), n, "{name}");
        }
    }

    #[test]
    fn weyl_group_orders() {
        for (name, n) in [("GL3", 6), ("B2", 8), ("G2", 12), ("D4", 192), ("B3_ad", 48)] {
            assert_eq!(d(name).weyl_elements().len(), n, "{name}");
        }
    }

    #[test]
    fn orbit_weight_examples() {
        let g2 = d("GL2");
        assert_eq!(g2.orbit_weight(0).unwrap().coords(), &[rat(1, 2), rat(-1, 2)]);
        let g3 = d("GL3");
        assert_eq!(g3.orbit_weight(0).unwrap().coords(), &[rat(2, 3), rat(-1, 3), rat(-1, 3)]);
        // ω_{α_1} + ω_{α_2} = α_1 + α_2 for A_2
        let t = d("2A2");
        let expected = t.root_vector(&[1i64, 1]);
        assert_eq!(t.orbit_weight(0).unwrap(), expected);
        assert!(matches!(t.orbit_weight(1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn dominant_representative_examples() {
        let g2 = d("GL2");
        let (v, w) = g2.dominant_representative(&CoVec::from_ints(&[0, 1]));
        assert_eq!(v, CoVec::from_ints(&[1, 0]));
        assert_eq!(w, WeylWord(vec![0]));

        let g3 = d("GL3");
        let third = CoVec::new(vec![rat(1, 3); 3]);
        let (v, w) = g3.dominant_representative(&third);
        assert_eq!(v, third);
        assert!(w.is_empty());
        let (v, w) = g3.dominant_representative(&CoVec::from_ints(&[0, 1, 0]));
        assert_eq!(v, CoVec::from_ints(&[1, 0, 0]));
        assert_eq!(w, WeylWord(vec![0]));
        assert_eq!(g3.act_co(&w, &CoVec::from_ints(&[0, 1, 0])), v);
    }

    #[test]
    fn coxeter_words() {
        assert_eq!(d("GL2").coxeter_element(), WeylWord(vec![0]));
        assert_eq!(d("GL3").coxeter_element(), WeylWord(vec![0, 1]));
        assert_eq!(d("2A2").coxeter_element(), WeylWord(vec![0]));
        assert_eq!(d("3D4").coxeter_element(), WeylWord(vec![0, 1]));
    }

    #[test]
    fn sigma_average_of_twisted_a2() {
        let t = d("2A2");
        let avg = t.sigma_average(&CoVec::from_ints(&[1, 0]));
        assert_eq!(avg.coords(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(t.sigma_average(&avg), avg);
        let _ = int(0);
    }

    #[test]
    fn json_round_trip_revalidates() {
        let g = d("3D4");
        let js = g.to_json();
        let back: RootDatum = serde_json::from_str(&js).unwrap();
        assert_eq!(back.cartan(), g.cartan());
        let mut raw: serde_json::Value = serde_json::from_str(&js).unwrap();
        raw["orbit_reps"] = serde_json::json!([0]);
        assert!(serde_json::from_value::<RootDatum>(raw).is_err());
    }
}
