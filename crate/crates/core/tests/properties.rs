use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use halg::constructions::{evans_griffith, spherical_chain, theorem_sequence};
use halg::fdmodule::{injective_envelope, vdual, FdModuleData};
use halg::fixtures::{a2, dual_numbers, random_fd_modules, random_integer_modules, truncated_cubic};
use halg::homology::{
    dual_module, eval_map, ext, ext_from, lemma21_sequence, resolution, resolve_presentation, torsionfree_level, transpose,
};
use halg::integers::{determinant, smith_normal_form, IntMatrix};
use halg::lifting::{iterated_schanuel, schanuel_bridge};
use halg::module::{cokernel, is_exact_at, kernel_module, pullback, pushout, FPModule, ModuleMap};
use halg::{opposite_transfer, FdRing, HalgError, Integers, Matrix, ModuleInvariant, Ring, Side};

fn int_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-bound..=bound, c), r)
            .prop_map(move |rows| Matrix::from_rows(c, rows.into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect()))
    })
}

fn fd_ring(i: usize) -> FdRing {
    match i % 4 {
        0 => dual_numbers(),
        1 => truncated_cubic(),
        2 => a2(),
        _ => a2().opposite(),
    }
}

fn fd_module(ring: usize, side: bool, seed: u64) -> FPModule<FdRing> {
    let side = if side { Side::Left } else { Side::Right };
    random_fd_modules(&fd_ring(ring), side, seed, 1, 3).remove(0)
}

fn int_module(seed: u64) -> FPModule<Integers> {
    random_integer_modules(seed, 1, 4, 4).remove(0)
}

/// Left kernel of `a` over the rationals, cleared to integer rows.
fn rational_left_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    // Reduce the transpose; free columns give the kernel basis.
    let (m, n) = (a.rows(), a.cols());
    let mut t: Vec<Vec<BigRational>> = (0..n).map(|j| (0..m).map(|i| BigRational::from(a.get(i, j).clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(p) = (row..n).find(|&r| !t[r][col].is_zero()) else { continue };
        t.swap(row, p);
        let inv = t[row][col].recip();
        for x in t[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != row && !t[r][col].is_zero() {
                let f = t[r][col].clone();
                let src = t[row].clone();
                for (x, s) in t[r].iter_mut().zip(src.iter()) {
                    *x = &*x - &f * s;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut out = Vec::new();
    for free in (0..m).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); m];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -t[r][free].clone();
        }
        let den = v.iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        out.push(v.iter().map(|x| (x * BigRational::from(den.clone())).to_integer()).collect());
    }
    out
}

fn rank_q(rows: &[Vec<BigInt>], cols: usize) -> usize {
    rows.len() - rational_left_kernel(&Matrix::from_rows(cols, rows.to_vec())).len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integer_kernel_generators_annihilate(a in int_matrix(6, 6, 5)) {
        let k = Integers.kernel_gens(&a);
        prop_assert!(k.rows() == 0 || Integers.mat_is_zero(&Integers.mat_mul(&k, &a)));
    }

    #[test]
    fn integer_kernel_matches_rational_oracle(a in int_matrix(6, 6, 5)) {
        let k = Integers.kernel_gens(&a);
        let oracle = rational_left_kernel(&a);
        for v in &oracle {
            let x = Matrix::from_rows(a.rows(), vec![v.clone()]);
            prop_assert!(Integers.mat_is_zero(&Integers.mat_mul(&x, &a)));
            prop_assert!(k.rows() > 0 && Integers.solve(&k, &x).is_some());
        }
        let k_rows: Vec<Vec<BigInt>> = (0..k.rows()).map(|i| k.row_vec(i)).collect();
        prop_assert_eq!(rank_q(&k_rows, a.rows()), oracle.len());
    }

    #[test]
    fn integer_solve_is_exact(a in int_matrix(5, 5, 5), xs in proptest::collection::vec(-4i64..=4, 15)) {
        let x0 = Matrix::from_rows(a.rows(), xs.chunks(a.rows()).take(3).map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let b = Integers.mat_mul(&x0, &a);
        let x = Integers.solve(&a, &b);
        prop_assert!(x.is_some());
        prop_assert_eq!(Integers.mat_mul(&x.unwrap(), &a), b);
    }

    #[test]
    fn smith_form_identities(a in int_matrix(6, 6, 9)) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(Integers.mat_mul(&Integers.mat_mul(&s.u, &a), &s.v), s.s.clone());
        prop_assert!(determinant(&s.u).abs().is_one());
        prop_assert!(determinant(&s.v).abs().is_one());
        let d = s.diagonal();
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn canonical_decomposition_is_presentation_invariant(seed in any::<u64>(), i in 0usize..4, j in 0usize..4, c in -3i64..=3) {
        let m = int_module(seed);
        let inv = m.invariant();
        let rel = m.relations();
        if rel.rows() >= 2 {
            let (i, j) = (i % rel.rows(), j % rel.rows());
            if i != j {
                let mut rows: Vec<Vec<BigInt>> = (0..rel.rows()).map(|r| rel.row_vec(r)).collect();
                let src = rows[i].clone();
                for (x, s) in rows[j].iter_mut().zip(src.iter()) {
                    *x += BigInt::from(c) * s;
                }
                rows.swap(0, 1);
                let moved = FPModule::new(Integers, Side::Left, m.n_gens(), Matrix::from_rows(m.n_gens(), rows));
                prop_assert_eq!(moved.invariant(), inv.clone());
            }
        }
        // Extra generator y = c * x_0 with relation y - c x_0.
        let g = m.n_gens();
        let mut rows: Vec<Vec<BigInt>> = (0..rel.rows()).map(|r| { let mut v = rel.row_vec(r); v.push(BigInt::zero()); v }).collect();
        let mut extra = vec![BigInt::zero(); g + 1];
        extra[0] = BigInt::from(-c);
        extra[g] = BigInt::one();
        rows.push(extra);
        let padded = FPModule::new(Integers, Side::Left, g + 1, Matrix::from_rows(g + 1, rows));
        prop_assert_eq!(padded.invariant(), inv);
    }

    #[test]
    fn opposite_transfer_is_involutive(ring in 0usize..4, seed in any::<u64>(), zseed in any::<u64>()) {
        let r = fd_ring(ring);
        let a = random_fd_modules(&r, Side::Left, seed, 1, 3).remove(0);
        let back = opposite_transfer(&r.opposite(), &opposite_transfer(&r, a.relations()));
        prop_assert_eq!(&back, a.relations());
        let z = int_module(zseed);
        prop_assert_eq!(&opposite_transfer(&Integers, &opposite_transfer(&Integers, z.relations())), z.relations());
    }

    #[test]
    fn fd_kernel_generators_annihilate_and_solve(ring in 0usize..4, seed in any::<u64>()) {
        let r = fd_ring(ring);
        let a = random_fd_modules(&r, Side::Left, seed, 1, 3).remove(0).relations().clone();
        if a.rows() > 0 {
            let k = r.kernel_gens(&a);
            prop_assert!(k.rows() == 0 || r.mat_is_zero(&r.mat_mul(&k, &a)));
            let x = Matrix::from_rows(a.rows(), fd_rows(&r, seed, 2, a.rows()));
            let target = r.mat_mul(&x, &a);
            let sol = r.solve(&a, &target);
            prop_assert!(sol.is_some());
            prop_assert_eq!(r.mat_mul(&sol.unwrap(), &a), target);
        }
    }

    #[test]
    fn projective_cover_dimension(ring in 0usize..4, side in any::<bool>(), seed in any::<u64>()) {
        let m = fd_module(ring, side, seed);
        let a = m.ring();
        let cover = a.projective_cover(m.n_gens(), m.relations());
        let p = FPModule::new(a.clone(), m.side(), cover.idempotents.len(), a.term_relations(&cover.idempotents));
        let dm = m.invariant().dimension().unwrap();
        let dp = p.invariant().dimension().unwrap();
        prop_assert!(dp >= dm);
        let projective = resolution(&m, 1).rank(1) == 0;
        prop_assert_eq!(dp == dm, projective);
    }

    #[test]
    fn vdual_is_a_duality(ring in 0usize..4, side in any::<bool>(), seed in any::<u64>()) {
        let m = fd_module(ring, side, seed);
        let dd = vdual(&vdual(&m));
        prop_assert_eq!(dd.side(), m.side());
        prop_assert_eq!(dd.invariant(), m.invariant());
    }

    #[test]
    fn injective_envelope_is_essential(ring in 0usize..4, side in any::<bool>(), seed in any::<u64>()) {
        let m = fd_module(ring, side, seed);
        let env = injective_envelope(&m);
        prop_assert!(env.mono.is_well_defined() && env.mono.is_injective());
        prop_assert!(env.essential);
        prop_assert_eq!(FdModuleData::from_module(&m).socle_dim(), FdModuleData::from_module(&env.module).socle_dim());
    }

    #[test]
    fn dualization_flips_side(ring in 0usize..4, side in any::<bool>(), seed in any::<u64>()) {
        let m = fd_module(ring, side, seed);
        let d = dual_module(&m).module;
        prop_assert_eq!(d.side(), m.side().flip());
        prop_assert_eq!(dual_module(&d).module.side(), m.side());
        prop_assert_eq!(transpose(&m).side(), m.side().flip());
    }
}

fn random_map_into<R: Ring>(n: &FPModule<R>, rows: Vec<Vec<R::Elem>>) -> ModuleMap<R> {
    let src = FPModule::free(n.ring().clone(), n.side(), rows.len());
    ModuleMap::new(src, n.clone(), Matrix::from_rows(n.n_gens(), rows)).unwrap()
}

fn int_rows(seed: u64, count: usize, cols: usize) -> Vec<Vec<BigInt>> {
    (0..count).map(|i| (0..cols).map(|j| BigInt::from(((seed >> ((i * 5 + j) % 48)) & 7) as i64 - 3)).collect()).collect()
}

fn fd_rows(r: &FdRing, seed: u64, count: usize, cols: usize) -> Vec<Vec<Vec<u64>>> {
    let p = r.field().p();
    (0..count)
        .map(|i| (0..cols).map(|j| (0..r.dim()).map(|t| (seed >> ((i * 11 + j * 5 + t) % 56)) % p).collect()).collect())
        .collect()
}

fn check_module_ops<R: Ring>(f: &ModuleMap<R>) -> Result<(), TestCaseError> {
    let (_, incl) = kernel_module(f);
    prop_assert!(incl.is_well_defined() && incl.is_injective());
    prop_assert!(is_exact_at(&incl, f));
    let (_, proj) = cokernel(f);
    prop_assert!(proj.is_surjective());
    prop_assert!(is_exact_at(f, &proj));
    let min = f.target().minimal_presentation();
    prop_assert_eq!(min.module.invariant(), f.target().invariant());
    prop_assert!(min.to_min.is_iso());
    Ok(())
}

/// A cone over `f, g` from a random element of `X`, when one exists, factors through the pullback.
fn check_pullback<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>, x: Vec<R::Elem>) -> Result<(), TestCaseError> {
    let r = f.ring();
    let pb = pullback(f, g).unwrap();
    prop_assert!(pb.px.then(f).equals(&pb.py.then(g)));
    let xv = Matrix::from_rows(f.source().n_gens(), vec![x]);
    let fx = r.mat_mul(&xv, f.matrix());
    let z_rel = f.target().relations();
    let Some(sol) = r.solve(&g.matrix().vstack(z_rel), &fx) else { return Ok(()) };
    let yv = sol.col_range(0, g.source().n_gens());
    let pair = pb.px.matrix().hstack(pb.py.matrix());
    let xr = f.source().relations();
    let yr = g.source().relations();
    let rel = r.block_diag(xr, yr);
    let h = r.solve(&pair.vstack(&rel), &xv.hstack(&yv));
    prop_assert!(h.is_some());
    let po = pushout(&pb.px, &pb.py).unwrap();
    prop_assert!(pb.px.then(&po.ix).equals(&pb.py.then(&po.iy)));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integer_module_operations(seed in any::<u64>(), mseed in any::<u64>(), k in 1usize..=3) {
        let n = int_module(mseed);
        let f = random_map_into(&n, int_rows(seed, k, n.n_gens()));
        check_module_ops(&f)?;
        let g = random_map_into(&n, int_rows(seed.rotate_left(17), 2, n.n_gens()));
        check_pullback(&f, &g, int_rows(seed.rotate_left(5), 1, k).remove(0))?;
    }

    #[test]
    fn fd_module_operations(ring in 0usize..4, side in any::<bool>(), seed in any::<u64>(), mseed in any::<u64>(), k in 1usize..=2) {
        let n = fd_module(ring, side, mseed);
        let a = n.ring().clone();
        let f = random_map_into(&n, fd_rows(&a, seed, k, n.n_gens()));
        check_module_ops(&f)?;
        let g = random_map_into(&n, fd_rows(&a, seed.rotate_left(13), 2, n.n_gens()));
        check_pullback(&f, &g, fd_rows(&a, seed.rotate_left(7), 1, k).remove(0))?;
    }

    #[test]
    fn lemma21_on_random_presentations(seed in any::<u64>(), ring in 0usize..4, side in any::<bool>()) {
        prop_assert!(lemma21_sequence(&int_module(seed)).verify().all());
        prop_assert!(lemma21_sequence(&fd_module(ring, side, seed)).verify().all());
    }

    #[test]
    fn ext_is_resolution_independent(seed in any::<u64>(), ring in 0usize..4, side in any::<bool>()) {
        fn padded<R: Ring>(m: &FPModule<R>) -> FPModule<R> {
            // A redundant generator equal to the first one.
            let r = m.ring();
            let g = m.n_gens();
            let mut rows: Vec<Vec<R::Elem>> = (0..m.relations().rows()).map(|i| { let mut v = m.relations().row_vec(i); v.push(r.zero()); v }).collect();
            let mut extra = vec![r.zero(); g + 1];
            extra[0] = r.neg(&r.one());
            extra[g] = r.one();
            rows.push(extra);
            FPModule::new(r.clone(), m.side(), g + 1, Matrix::from_rows(g + 1, rows))
        }
        let z = int_module(seed);
        let fd = fd_module(ring, side, seed);
        let zp = resolve_presentation(&padded(&z), 5);
        let fp = resolve_presentation(&padded(&fd), 5);
        for i in 0..=4 {
            prop_assert_eq!(ext(&z, i).value().invariant(), ext_from(&zp, i).value().invariant());
            let a = ext(&fd, i).value().invariant();
            let b = ext_from(&fp, i).value().invariant();
            prop_assert_eq!(a.dimension(), b.dimension());
        }
    }

    #[test]
    fn evaluation_is_natural(seed in any::<u64>(), mseed in any::<u64>(), ring in 0usize..4, side in any::<bool>()) {
        fn check<R: Ring>(f: &ModuleMap<R>) -> Result<(), TestCaseError> {
            let em = eval_map(f.source());
            let en = eval_map(f.target());
            let ddf = halg::homology::dual_map_with(
                &halg::homology::dual_map_with(f, &em.dual, &en.dual),
                &en.double_dual,
                &em.double_dual,
            );
            prop_assert!(f.then(&en.sigma).equals(&em.sigma.then(&ddf)));
            Ok(())
        }
        let n = int_module(mseed);
        let m = int_module(seed);
        let rows = int_rows(seed, m.n_gens(), n.n_gens());
        if let Ok(f) = ModuleMap::new(m, n.clone(), Matrix::from_rows(n.n_gens(), rows)) {
            check(&f)?;
        }
        let n = fd_module(ring, side, mseed);
        let a = n.ring().clone();
        let f = random_map_into(&n, fd_rows(&a, seed, 2, n.n_gens()));
        check(&f)?;
    }

    #[test]
    fn double_transpose_keeps_torsion(seed in any::<u64>()) {
        let m = int_module(seed);
        let tt = transpose(&transpose(&m));
        match (m.invariant(), tt.invariant()) {
            (ModuleInvariant::Abelian(a), ModuleInvariant::Abelian(b)) => prop_assert_eq!(a.factors, b.factors),
            _ => prop_assert!(false),
        }
    }

    #[test]
    fn torsionfree_levels_match_evaluation(seed in any::<u64>(), ring in 0usize..4, side in any::<bool>()) {
        fn check<R: Ring>(m: &FPModule<R>) -> Result<(), TestCaseError> {
            let sigma = eval_map(m).sigma;
            let level = torsionfree_level(m, 2);
            prop_assert_eq!(level >= 1, sigma.is_injective());
            prop_assert_eq!(level >= 2, sigma.is_iso());
            Ok(())
        }
        check(&int_module(seed))?;
        check(&fd_module(ring, side, seed))?;
    }

    #[test]
    fn schanuel_bridges_are_inverse(seed in any::<u64>(), ring in 0usize..4, d in 1usize..=2) {
        let m = fd_module(ring, true, seed);
        let min = resolution(&m, d + 1);
        let other = resolve_presentation(&m, d + 1);
        prop_assert!(other.is_exact());
        prop_assert!(iterated_schanuel(&min, &other, d).unwrap().verify());
        prop_assert!(schanuel_bridge(&other, &min, d).unwrap().verify());
    }

    #[test]
    fn constructions_reverify(seed in any::<u64>(), ring in 0usize..4, side in any::<bool>(), d in 0usize..=2) {
        fn check<R: Ring>(m: &FPModule<R>, d: usize) -> Result<(), TestCaseError> {
            match theorem_sequence(m, d) {
                Ok(c) => {
                    prop_assert!(c.checks.all());
                    prop_assert_eq!(c.verify(), c.checks);
                    if d == 0 {
                        prop_assert_eq!(c.b.invariant(), lemma21_sequence(m).ext1.invariant());
                    }
                }
                Err(HalgError::PreconditionFailed { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
            match spherical_chain(m, 2) {
                Ok(c) => prop_assert!(c.checks.all() && c.verify() == c.checks),
                Err(HalgError::PreconditionFailed { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
            match evans_griffith(m, d) {
                Ok(c) => prop_assert!(c.checks.all() && c.checks.top_exact && c.s_level >= d + 2),
                Err(HalgError::PreconditionFailed { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
            Ok(())
        }
        check(&int_module(seed), d)?;
        check(&fd_module(ring, side, seed), d)?;
    }
}
