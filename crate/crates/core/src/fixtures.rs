//! Small rings and module corpora used by tests, the command line and the
//! spot checks.

use num_bigint::BigInt;
use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fdalgebra::{ArrowSpec, FdElem, FdRing, QuiverSpec};
use crate::integers::Integers;
use crate::module::FPModule;
use crate::ring::{Matrix, Ring, Side};

fn quiver(p: u64, vertices: &[&str], arrows: &[(&str, &str, &str)], relations: &[&str]) -> FdRing {
    FdRing::from_quiver(&QuiverSpec {
        p,
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        arrows: arrows.iter().map(|&(name, from, to)| ArrowSpec { name: name.into(), from: from.into(), to: to.into() }).collect(),
        relations: relations.iter().map(|s| s.to_string()).collect(),
        nilpotency_bound: None,
    })
    .expect("fixture algebra is admissible")
}

/// `F_2[x]/(x^2)`.
pub fn dual_numbers() -> FdRing {
    quiver(2, &["1"], &[("x", "1", "1")], &["x*x"])
}

/// `F_3[x]/(x^3)`.
pub fn truncated_cubic() -> FdRing {
    quiver(3, &["1"], &[("x", "1", "1")], &["x*x*x"])
}

/// The path algebra of `1 -a-> 2` over `F_2`.
pub fn a2() -> FdRing {
    quiver(2, &["1", "2"], &[("a", "1", "2")], &[])
}

/// `F_2 × F_2`.
pub fn semisimple() -> FdRing {
    quiver(2, &["1", "2"], &[], &[])
}

/// `1 -a-> 2 -b-> 3 -c-> 4` over `F_2` with radical square zero.
pub fn a4_radical_square_zero() -> FdRing {
    quiver(2, &["1", "2", "3", "4"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4")], &["b*a", "c*b"])
}

/// `1 -a-> 2 <-b- 3` over `F_2`: hereditary, injective hull of the regular module not projective.
pub fn a3_sink() -> FdRing {
    quiver(2, &["1", "2", "3"], &[("a", "1", "2"), ("b", "3", "2")], &[])
}

/// `F_2[x, y]/(x, y)^2`.
pub fn two_loops_radical_square_zero() -> FdRing {
    quiver(2, &["1"], &[("x", "1", "1"), ("y", "1", "1")], &["x*x", "x*y", "y*x", "y*y"])
}

/// Every fd fixture with its name.
pub fn fd_rings() -> Vec<(&'static str, FdRing)> {
    vec![
        ("dual-numbers", dual_numbers()),
        ("truncated-cubic", truncated_cubic()),
        ("a2", a2()),
        ("semisimple", semisimple()),
        ("a4-rad2", a4_radical_square_zero()),
    ]
}

pub fn z_module(n_gens: usize, rows: &[&[i64]]) -> FPModule<Integers> {
    let rows = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    FPModule::new(Integers, Side::Left, n_gens, Matrix::from_rows(n_gens, rows))
}

/// `Z/n`.
pub fn z_mod(n: i64) -> FPModule<Integers> {
    z_module(1, &[&[n]])
}

pub fn z_free(n: usize) -> FPModule<Integers> {
    FPModule::free(Integers, Side::Left, n)
}

/// `Z/2 ⊕ Z`.
pub fn z2_plus_z() -> FPModule<Integers> {
    z_module(2, &[&[2, 0]])
}

/// The named integer corpus: `Z/2`, `Z/6`, `Z/2 ⊕ Z`, `Z^2`.
pub fn integer_corpus() -> Vec<(String, FPModule<Integers>)> {
    vec![("Z/2".into(), z_mod(2)), ("Z/6".into(), z_mod(6)), ("Z/2+Z".into(), z2_plus_z()), ("Z^2".into(), z_free(2))]
}

/// Random presentations with at most `max` generators and relations and
/// entries in `[-bound, bound]`.
pub fn random_integer_modules(seed: u64, count: usize, max: usize, bound: i64) -> Vec<FPModule<Integers>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = rng.gen_range(1..=max);
            let r = rng.gen_range(0..=max);
            let rows = (0..r).map(|_| (0..g).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect();
            FPModule::new(Integers, Side::Left, g, Matrix::from_rows(g, rows))
        })
        .collect()
}

/// The acting ring for modules on `side` over `r`.
pub fn acting(r: &FdRing, side: Side) -> FdRing {
    match side {
        Side::Left => r.clone(),
        Side::Right => r.opposite(),
    }
}

fn cyclic(r: &FdRing, side: Side, rel: Vec<FdElem>) -> FPModule<FdRing> {
    let rows = rel.into_iter().map(|x| vec![x]).collect();
    FPModule::new(r.clone(), side, 1, Matrix::from_rows(1, rows))
}

/// The indecomposable projective at vertex `v`.
pub fn projective(r: &FdRing, side: Side, v: usize) -> FPModule<FdRing> {
    let a = acting(r, side);
    let comp = a.sub(&a.one(), &a.idempotent(v));
    let rel = if a.is_zero(&comp) { vec![] } else { vec![comp] };
    cyclic(&a, side, rel)
}

/// The simple module at vertex `v`.
pub fn simple(r: &FdRing, side: Side, v: usize) -> FPModule<FdRing> {
    let a = acting(r, side);
    let mut rel = vec![a.sub(&a.one(), &a.idempotent(v))];
    rel.extend(a.radical_indices().iter().map(|&i| a.basis_elem(i)));
    cyclic(&a, side, rel).minimized()
}

/// The radical of the projective at vertex `v`.
pub fn radical_of_projective(r: &FdRing, side: Side, v: usize) -> FPModule<FdRing> {
    let a = acting(r, side);
    let p = projective(r, side, v);
    let e = a.idempotent(v);
    let gens: Vec<Vec<FdElem>> = a
        .radical_indices()
        .iter()
        .map(|&i| a.mul(&a.basis_elem(i), &e))
        .filter(|x| !a.is_zero(x))
        .map(|x| vec![x])
        .collect();
    p.submodule(&Matrix::from_rows(1, gens)).0.minimized()
}

/// Simples, indecomposable projectives and radicals of projectives on one side.
pub fn fd_corpus(r: &FdRing, side: Side) -> Vec<(String, FPModule<FdRing>)> {
    let s = if side == Side::Left { "L" } else { "R" };
    let n = r.n_vertices();
    let mut out = Vec::new();
    for v in 0..n {
        out.push((format!("S{}{s}", v + 1), simple(r, side, v)));
    }
    for v in 0..n {
        out.push((format!("P{}{s}", v + 1), projective(r, side, v)));
    }
    for v in 0..n {
        out.push((format!("radP{}{s}", v + 1), radical_of_projective(r, side, v)));
    }
    out
}

/// Random presentations over `r` with at most `max_gens` generators.
pub fn random_fd_modules(r: &FdRing, side: Side, seed: u64, count: usize, max_gens: usize) -> Vec<FPModule<FdRing>> {
    let a = acting(r, side);
    let p = a.field().p();
    let dim = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elem = |rng: &mut ChaCha8Rng| -> FdElem {
        (0..dim).map(|_| if rng.gen_bool(0.35) { rng.gen_range(1..p) } else { 0 }).collect()
    };
    (0..count)
        .map(|_| {
            let g = rng.gen_range(1..=max_gens);
            let nr = rng.gen_range(0..=g + 1);
            let rows = (0..nr).map(|_| (0..g).map(|_| elem(&mut rng)).collect()).collect();
            FPModule::new(a.clone(), side, g, Matrix::from_rows(g, rows))
        })
        .collect()
}
