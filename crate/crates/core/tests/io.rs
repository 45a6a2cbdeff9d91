use halg::constructions::{approximation, evans_griffith, spherical_chain, theorem_sequence};
use halg::fixtures::{a2, dual_numbers, fd_corpus, simple, z2_plus_z, z_free};
use halg::gorenstein::classify;
use halg::homology::{lemma21_sequence, resolution};
use halg::io::*;
use halg::{HalgError, Integers, Ring, Side};
use serde_json::json;

#[test]
fn integer_module_file() {
    let v = json!({"ring": {"type": "integers"}, "side": "left", "generators": 2, "relations": [["2", "0"]]});
    let AnyModule::Integers(m) = module_from_json(&v).unwrap() else { panic!("backend") };
    assert_eq!(m.invariant().to_string(), "Z/2 + Z");
    assert_eq!(module_file(&m), v);
}

#[test]
fn quiver_module_file_right_side() {
    let v = json!({
        "ring": {"type": "bound_quiver", "p": 2, "vertices": ["1", "2"], "arrows": [{"name": "a", "from": "1", "to": "2"}], "relations": []},
        "side": "right",
        "generators": 1,
        "relations": [["e1"]],
    });
    let AnyModule::Fd(m) = module_from_json(&v).unwrap() else { panic!("backend") };
    assert!(m.ring().is_flipped());
    assert_eq!(m.invariant().dimension(), Some(2));
    let back = module_file(&m);
    let AnyModule::Fd(m2) = module_from_json(&back).unwrap() else { panic!("backend") };
    assert_eq!(m2.invariant(), m.invariant());
}

#[test]
fn malformed_inputs() {
    assert!(matches!(ring_from_json(&json!({"type": "reals"})), Err(HalgError::Parse(_))));
    let ragged = json!({"ring": {"type": "integers"}, "generators": 2, "relations": [["1"]]});
    assert!(matches!(module_from_json(&ragged), Err(HalgError::Parse(_))));
    let bad_elem = json!({"ring": {"type": "integers"}, "generators": 1, "relations": [["x"]]});
    assert!(matches!(module_from_json(&bad_elem), Err(HalgError::Parse(_))));
    let bad_side = json!({"ring": {"type": "integers"}, "side": "up", "generators": 1});
    assert!(matches!(module_from_json(&bad_side), Err(HalgError::Parse(_))));
}

#[test]
fn canonical_string_sorts_keys() {
    assert_eq!(canonical_string(&json!({"b": 1, "a": [true, null]})), r#"{"a":[true,null],"b":1}"#);
}

#[test]
fn resolution_round_trip() {
    let r = a2();
    for (_, m) in fd_corpus(&r, Side::Right) {
        let res = resolution(&m, 3);
        let back = resolution_from_json(&r, &resolution_to_json(&res)).unwrap();
        assert_eq!(back.maps, res.maps);
        assert_eq!(back.idempotents, res.idempotents);
        assert_eq!(back.module, res.module);
        assert!(back.is_exact());
    }
}

#[test]
fn theorem_round_trip() {
    let c = theorem_sequence(&z2_plus_z(), 0).unwrap();
    let v = theorem_to_json(&c);
    let back = theorem_from_json(&Integers, &v).unwrap();
    assert_eq!(theorem_checks_json(&back.verify()), v["checks"]);
    let r = dual_numbers();
    let c = theorem_sequence(&simple(&r, Side::Left, 0), 2).unwrap();
    let back = theorem_from_json(&r, &theorem_to_json(&c)).unwrap();
    assert!(back.verify().all());
}

#[test]
fn chain_eg_approx_round_trip() {
    let c = spherical_chain(&z2_plus_z(), 2).unwrap();
    let back = chain_from_json(&Integers, &chain_to_json(&c)).unwrap();
    assert_eq!(back.verify(), c.checks);
    let e = evans_griffith(&z2_plus_z(), 0).unwrap();
    let back = eg_from_json(&Integers, &eg_to_json(&e)).unwrap();
    assert_eq!(back.verify(), e.checks);
    let r = dual_numbers();
    let tests: Vec<_> = fd_corpus(&r, Side::Left).into_iter().map(|x| x.1).collect();
    let a = approximation(&simple(&r, Side::Left, 0), 3, &tests).unwrap();
    let back = approx_from_json(&r, &approx_to_json(&a)).unwrap();
    assert_eq!(back.verify(), a.checks);
    assert!(a.checks.all());
}

#[test]
fn lemma21_and_gorenstein_round_trip() {
    let l = lemma21_sequence(&z_free(2));
    let back = lemma21_from_json(&Integers, &lemma21_to_json(&l)).unwrap();
    assert!(back.verify().all());
    let rep = classify(&a2(), 2, 8).unwrap();
    let back = gorenstein_from_json(&gorenstein_to_json(&rep)).unwrap();
    assert_eq!(back.fd, rep.fd);
    assert!(back.verify().all());
    assert!(Integers.opposite() == Integers);
}
