use halg::constructions::{evans_griffith, spherical_chain, theorem_sequence};
use halg::fixtures::{
    a2, a4_radical_square_zero, dual_numbers, fd_corpus, projective, random_fd_modules, simple, z2_plus_z, z_free, z_mod,
};
use halg::{HalgError, Precondition, Side};

#[test]
fn torsion_plus_free_at_zero() {
    let c = theorem_sequence(&z2_plus_z(), 0).unwrap();
    assert!(c.checks.all(), "{:?}", c.checks);
    assert_eq!(c.b.invariant().to_string(), "Z/2");
    assert_eq!(c.c.invariant().to_string(), "Z");
    assert!(c.projective.is_zero());
}

#[test]
fn free_module_every_degree() {
    for d in 0..=3 {
        let c = theorem_sequence(&z_free(2), d).unwrap();
        assert!(c.checks.all(), "d = {d}: {:?}", c.checks);
        assert!(c.b.is_zero());
    }
}

#[test]
fn simple_injective_over_a2() {
    let r = a2();
    let c = theorem_sequence(&simple(&r, Side::Left, 0), 0).unwrap();
    assert!(c.checks.all(), "{:?}", c.checks);
    assert_eq!(c.b.invariant().dimension(), Some(1));
    assert!(c.c.is_zero());
}

#[test]
fn reflexive_simple_at_one() {
    let r = dual_numbers();
    let c = theorem_sequence(&simple(&r, Side::Left, 0), 1).unwrap();
    assert!(c.checks.all(), "{:?}", c.checks);
    assert!(c.b.is_zero());
}

#[test]
fn higher_degrees_over_self_injective() {
    let r = dual_numbers();
    for d in 2..=3 {
        let c = theorem_sequence(&simple(&r, Side::Left, 0), d).unwrap();
        assert!(c.checks.all(), "d = {d}: {:?}", c.checks);
        assert!(c.b.is_zero());
    }
}

#[test]
fn torsion_is_not_torsionless() {
    match theorem_sequence(&z_mod(2), 1) {
        Err(HalgError::PreconditionFailed { condition, index, .. }) => {
            assert_eq!(condition, Precondition::TorsionfreeLevel);
            assert_eq!(index, 1);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn chain_on_torsion_plus_free() {
    let c = spherical_chain(&z2_plus_z(), 2).unwrap();
    assert!(c.checks.all(), "{:?}", c.checks);
    assert_eq!(c.b(0).invariant().to_string(), "Z/2");
    assert!(c.b(1).is_zero());
}

#[test]
fn evans_griffith_examples() {
    let c = evans_griffith(&z_mod(2), 0).unwrap();
    assert!(c.checks.all(), "{:?}", c.checks);
    assert_eq!(c.s.invariant().to_string(), "Z");
    let r = a2();
    let c = evans_griffith(&simple(&r, Side::Left, 0), 0).unwrap();
    assert!(c.checks.all(), "{:?}", c.checks);
    assert_eq!(c.s.invariant().dimension(), Some(2));
    assert!(c.s.is_projective());
    let c = evans_griffith(&projective(&r, Side::Left, 1), 1).unwrap();
    assert!(c.checks.all(), "{:?}", c.checks);
}

#[test]
fn radical_square_zero_sweep() {
    let r = a4_radical_square_zero();
    let mut ran = 0;
    for side in [Side::Left, Side::Right] {
        let mut ms = fd_corpus(&r, side);
        ms.extend(random_fd_modules(&r, side, 5, 6, 3).into_iter().enumerate().map(|(i, m)| (format!("rand{i}"), m)));
        for (name, m) in ms {
            for d in 0..=3 {
                match theorem_sequence(&m, d) {
                    Ok(c) => {
                        assert!(c.checks.all(), "{name} {side:?} d = {d}: {:?}", c.checks);
                        ran += 1;
                    }
                    Err(HalgError::PreconditionFailed { .. }) => {}
                    Err(e) => panic!("{name} {side:?} d = {d}: {e}"),
                }
            }
        }
    }
    assert!(ran > 20);
}
