use num_rational::Rational64;
use proptest::prelude::*;

use newton_strata::crosssec::{self, Kind, Valuation};
use newton_strata::fqoracle::{self, TruncSeries};
use newton_strata::isocrystal::{self, SigmaClass};
use newton_strata::linalg;
use newton_strata::strata::{self, LaurentPolyZ};
use newton_strata::{preset, CoVec, RootDatum, WeylWord};

const NAMES: [&str; 21] = [
    "GL2", "GL3", "GL4", "SL2", "SL3", "SL4", "PGL2", "PGL3", "B2", "C2", "G2", "B3", "C3", "D4", "B3_ad",
    "C3_ad", "D4_ad", "2A2", "2A3", "3D4", "2A3_ad",
];

fn datum(i: usize) -> RootDatum {
    preset(NAMES[i % NAMES.len()]).unwrap()
}

fn ints(v: &[i64], n: usize) -> CoVec {
    CoVec::from_ints(&v[..n])
}

fn word(d: &RootDatum, raw: &[usize]) -> WeylWord {
    let s = d.semisimple_rank().max(1);
    WeylWord(if d.semisimple_rank() == 0 { Vec::new() } else { raw.iter().map(|x| x % s).collect() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kottwitz_point_is_additive(i in 0usize..21, a in prop::collection::vec(-5i64..6, 4), b in prop::collection::vec(-5i64..6, 4)) {
        let d = datum(i);
        let n = d.rank();
        let ka = isocrystal::kottwitz_point(&d, &ints(&a, n)).unwrap();
        let kb = isocrystal::kottwitz_point(&d, &ints(&b, n)).unwrap();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let ks = isocrystal::kottwitz_point(&d, &ints(&sum, n)).unwrap();
        for k in 0..ks.coords.len() {
            let m = ks.moduli[k];
            let expect = ka.coords[k] + kb.coords[k];
            prop_assert_eq!(ks.coords[k], if m == 0 { expect } else { expect.rem_euclid(m) });
        }
    }

    #[test]
    fn kottwitz_point_kills_coroots_and_sigma_defect(i in 0usize..21, a in prop::collection::vec(-4i64..5, 4), j in 0usize..4) {
        let d = datum(i);
        let n = d.rank();
        let lam = ints(&a, n);
        let k = isocrystal::kottwitz_point(&d, &lam).unwrap();
        if d.semisimple_rank() > 0 {
            let shifted = &lam + &d.simple_coroot(j % d.semisimple_rank());
            prop_assert_eq!(&isocrystal::kottwitz_point(&d, &shifted).unwrap(), &k);
        }
        prop_assert_eq!(&isocrystal::kottwitz_point(&d, &d.sigma_co(&lam)).unwrap(), &k);
    }

    #[test]
    fn newton_point_is_dominant_and_sigma_fixed(i in 0usize..21, a in prop::collection::vec(-4i64..5, 4), w in prop::collection::vec(0usize..4, 0..6)) {
        let d = datum(i);
        let lam = ints(&a, d.rank());
        let nu = isocrystal::newton_point(&d, &lam, &word(&d, &w));
        prop_assert!(d.is_dominant(&nu));
        prop_assert_eq!(d.sigma_co(&nu), nu.clone());
        // the average keeps the central part of λ^◇
        let diff = &d.sigma_average(&lam) - &nu;
        prop_assert!(d.coroot_coords(&diff).is_some());
    }

    #[test]
    fn dominant_representative_is_in_the_orbit(i in 0usize..21, a in prop::collection::vec(-6i64..7, 4)) {
        let d = datum(i);
        let v = ints(&a, d.rank());
        let (dom, w) = d.dominant_representative(&v);
        prop_assert!(d.is_dominant(&dom));
        prop_assert_eq!(d.act_co(&w, &v), dom);
    }

    #[test]
    fn valuation_patterns_land_in_their_stratum(i in 0usize..21, a in prop::collection::vec(0i64..4, 4), v in prop::collection::vec(prop::option::of(-6i64..7), 4)) {
        let d = datum(i);
        let mu = ints(&a, d.rank());
        prop_assume!(d.is_dominant(&mu));
        let pattern: Vec<Valuation> = v[..d.orbit_count()]
            .iter()
            .map(|x| x.map_or(Valuation::Infinite, Valuation::Finite))
            .collect();
        let b = crosssec::classify_valuation_pattern(&d, &mu, &pattern).unwrap();
        let shape = crosssec::stratum_shape(&d, &mu, &b).unwrap();
        prop_assert!(shape.contains(&pattern));
        let in_bgmu = isocrystal::enumerate_bgmu(&d, &mu).unwrap().contains(&b);
        let nonneg = pattern.iter().all(|x| x.finite().is_none_or(|y| y >= 0));
        if nonneg {
            prop_assert!(in_bgmu);
        }
    }

    #[test]
    fn smith_solve_roundtrip(entries in prop::collection::vec(-5i64..6, 12), x in prop::collection::vec(-5i64..6, 4)) {
        let a: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
        let b = linalg::mat_vec(&a, &x);
        let y = linalg::solve_z(&a, &b).expect("b lies in the image");
        prop_assert_eq!(linalg::mat_vec(&a, &y), b);
    }

    #[test]
    fn laurent_ring_laws(a in prop::collection::vec((-3i64..4, -4i64..5), 0..5), b in prop::collection::vec((-3i64..4, -4i64..5), 0..5), c in prop::collection::vec((-3i64..4, -4i64..5), 0..5), q in 2i64..7) {
        let build = |t: &[(i64, i64)]| t.iter().fold(LaurentPolyZ::zero(), |acc, &(co, e)| &acc + &LaurentPolyZ::monomial(co, e));
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).eval(q), a.eval(q) * b.eval(q));
        prop_assert_eq!((&a + &b).eval(q), a.eval(q) + b.eval(q));
    }

    #[test]
    fn truncated_series_ring_laws(a in prop::collection::vec(0u64..5, 4), b in prop::collection::vec(0u64..5, 4), c in prop::collection::vec(0u64..5, 4)) {
        let s = |v: &[u64]| TruncSeries::from_coeffs(5, 4, v);
        let (a, b, c) = (s(&a), s(&b), s(&c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) {
            if va + vb < 4 {
                prop_assert_eq!((&a * &b).valuation(), Some(va + vb));
            }
        }
    }

    #[test]
    fn newton_slopes_are_consistent(v in prop::collection::vec(prop::option::of(0i64..6), 1..5), last in 0i64..8) {
        let mut vals: Vec<Valuation> = v.iter().map(|x| x.map_or(Valuation::Infinite, Valuation::Finite)).collect();
        vals.push(Valuation::Finite(last));
        let slopes = fqoracle::newton_polygon_slopes(&vals).unwrap();
        prop_assert_eq!(slopes.len(), vals.len());
        let total: Rational64 = slopes.coords().iter().sum();
        prop_assert_eq!(total, Rational64::from_integer(last));
        prop_assert!(slopes.coords().windows(2).all(|w| w[0] >= w[1]));
        // every polygon point lies on or above the hull
        let mut acc = Rational64::from_integer(0);
        let ascending: Vec<Rational64> = slopes.coords().iter().rev().cloned().collect();
        for (i, s) in ascending.iter().enumerate() {
            acc += s;
            if let Valuation::Finite(x) = vals[i] {
                prop_assert!(Rational64::from_integer(x) >= acc);
            }
        }
    }
}

fn grid(d: &RootDatum, hi: i64) -> Vec<CoVec> {
    let n = d.rank();
    let side = (hi + 1) as usize;
    (0..side.pow(n as u32))
        .map(|mut idx| {
            CoVec::from_ints(
                &(0..n)
                    .map(|_| {
                        let x = (idx % side) as i64;
                        idx /= side;
                        x
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .filter(|mu| d.is_dominant(mu))
        .collect()
}

#[test]
fn enumerated_classes_satisfy_their_invariants() {
    for name in NAMES {
        let d = preset(name).unwrap();
        for mu in grid(&d, 2) {
            let classes = isocrystal::enumerate_bgmu(&d, &mu).unwrap();
            let top = isocrystal::top_class(&d, &mu).unwrap();
            assert_eq!(classes[0], top, "{name} {mu}");
            for b in &classes {
                assert!(d.is_dominant(&b.nu) && d.sigma_co(&b.nu) == b.nu, "{name} {mu} {b}");
                assert!(isocrystal::dominance_leq(&d, b, &top));
                let e = isocrystal::exponents(&d, &mu, &b.nu);
                for i in isocrystal::j_set(&d, &b.nu) {
                    assert!(e[i].is_integer(), "{name} {mu} {b}: integrality at {i}");
                }
                let shape = crosssec::stratum_shape(&d, &mu, b).unwrap();
                assert!(shape.codim() >= 0);
                let back = SigmaClass::from_json(&d, &serde_json::to_string(b).unwrap()).unwrap();
                assert_eq!(&back, b);
            }
            let top_shape = crosssec::stratum_shape(&d, &mu, &top).unwrap();
            assert!(top_shape.exponents.iter().all(|e| *e == Rational64::from_integer(0)));
        }
    }
}

#[test]
fn dominance_is_a_partial_order() {
    for name in NAMES {
        let d = preset(name).unwrap();
        for mu in grid(&d, 2) {
            let c = isocrystal::enumerate_bgmu(&d, &mu).unwrap();
            let leq: Vec<Vec<bool>> =
                c.iter().map(|a| c.iter().map(|b| isocrystal::dominance_leq(&d, a, b)).collect()).collect();
            let n = c.len();
            for a in 0..n {
                assert!(leq[a][a]);
                for b in 0..n {
                    if a != b {
                        assert!(!(leq[a][b] && leq[b][a]), "{name} {mu}: {} {}", c[a], c[b]);
                    }
                    for x in 0..n {
                        if leq[a][b] && leq[b][x] {
                            assert!(leq[a][x]);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn length_is_independent_of_mu_within_the_kappa_class() {
    for name in ["GL3", "SL3", "B2", "G2", "2A3", "3D4"] {
        let d = preset(name).unwrap();
        for mu in grid(&d, 2) {
            let classes = isocrystal::enumerate_bgmu(&d, &mu).unwrap();
            for k in 0..d.semisimple_rank() {
                let other = &mu + &d.simple_coroot(k);
                for b in &classes {
                    for b2 in &classes {
                        if isocrystal::dominance_leq(&d, b2, b) {
                            assert_eq!(
                                strata::length_formula(&d, &mu, b, b2).unwrap(),
                                strata::length_formula(&d, &other, b, b2).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn every_class_is_hit_by_its_generic_pattern() {
    for name in NAMES {
        let d = preset(name).unwrap();
        for mu in grid(&d, 2) {
            for b in isocrystal::enumerate_bgmu(&d, &mu).unwrap() {
                let shape = crosssec::stratum_shape(&d, &mu, &b).unwrap();
                let pattern: Vec<Valuation> = shape
                    .ceilings()
                    .iter()
                    .zip(&shape.kinds)
                    .map(|(&c, k)| match k {
                        Kind::Circle => Valuation::Finite(c),
                        Kind::Disk => Valuation::Infinite,
                    })
                    .collect();
                assert_eq!(crosssec::classify_valuation_pattern(&d, &mu, &pattern).unwrap(), b, "{name} {mu}");
            }
        }
    }
}
