use newton_strata::fqoracle;
use newton_strata::isocrystal::SigmaClass;
use newton_strata::{preset, CoVec};

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

#[test]
fn tally_output_does_not_depend_on_thread_count() {
    for (n, mu, p, m) in [(2, vec![1, 0], 3, 2), (3, vec![1, 0, 0], 2, 2), (2, vec![2, 0], 5, 2), (3, vec![1, 1, 0], 3, 1)] {
        let par = fqoracle::tally_strata(n, &mu, p, m).unwrap();
        let seq = single_threaded(|| fqoracle::tally_strata(n, &mu, p, m).unwrap());
        assert_eq!(par.to_tsv(), seq.to_tsv());
        assert_eq!(serde_json::to_string(&par).unwrap(), serde_json::to_string(&seq).unwrap());
        assert!(par.ok, "{}", par.to_tsv());
    }
}

#[test]
fn tally_of_gl2_minuscule() {
    let r = fqoracle::tally_strata(2, &[1, 0], 3, 2).unwrap();
    let observed: Vec<u64> = r.rows.iter().map(|row| row.observed).collect();
    assert_eq!(observed, vec![6, 3]);
    assert_eq!(r.total, 9);
    assert!(r.to_tsv().starts_with("class\tpredicted\tobserved\n"));
}

#[test]
fn tally_rejects_bad_input() {
    assert!(fqoracle::tally_strata(2, &[1, 0], 4, 2).is_err());
    assert!(fqoracle::tally_strata(2, &[0, 1], 3, 2).is_err());
    assert!(fqoracle::tally_strata(2, &[1, -1], 3, 2).is_err());
    assert!(fqoracle::tally_strata(2, &[1, 0, 0], 3, 2).is_err());
}

#[test]
fn classes_and_data_round_trip_through_json() {
    for name in ["GL3", "B3_ad", "2A3", "3D4"] {
        let d = preset(name).unwrap();
        let js = serde_json::to_string(&d).unwrap();
        let back: newton_strata::RootDatum = serde_json::from_str(&js).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), js);
        let mu = CoVec::from_ints(&vec![1; d.rank()]);
        if d.is_dominant(&mu) {
            for b in newton_strata::isocrystal::enumerate_bgmu(&d, &mu).unwrap() {
                let text = serde_json::to_string(&b).unwrap();
                assert_eq!(SigmaClass::from_json(&d, &text).unwrap(), b);
            }
        }
    }
}

#[test]
fn malformed_class_json_is_rejected() {
    let d = preset("GL2").unwrap();
    assert!(SigmaClass::from_json(&d, "{").is_err());
    assert!(SigmaClass::from_json(&d, r#"{"kappa":[1],"nu":["1/2"]}"#).is_err());
    assert!(SigmaClass::from_json(&d, r#"{"kappa":[1],"nu":["1/2","1/2"]}"#).is_ok());
}
