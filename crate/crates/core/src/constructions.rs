//! The syzygy constructions: the short exact sequence `0 -> B -> M ⊕ P -> C -> 0`,
//! chains of epimorphisms, approximations and Evans-Griffith representations.
//! Each result carries the data needed to re-derive its checks.

use crate::error::{HalgError, Precondition, Result};
use crate::homology::{
    dual_map_with, dual_module, eval_map, ext_from, grade, lemma21_sequence, projective_dimension, resolution, torsionfree_level,
    transpose, Capped, DualData, Resolution,
};
use crate::lifting::{ext_map, horseshoe, schanuel_bridge, stable_hom, StableHom};
use crate::module::{direct_sum, image, kernel_module, pullback, pushout, FPModule, ModuleMap, ShortExactSequence};
use crate::ring::{opposite_transfer, Matrix, ModuleInvariant, Ring};

pub const DEFAULT_CAP: usize = 8;

fn cap_for(d: usize) -> usize {
    DEFAULT_CAP.max(d + 2)
}

/// `x` with `x * a = b`, or an error naming `what`.
fn solve_rows<R: Ring>(r: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>, what: &str) -> Result<Matrix<R::Elem>> {
    if b.rows() == 0 || r.mat_is_zero(b) {
        return Ok(r.zeros(b.rows(), a.rows()));
    }
    if a.rows() == 0 {
        return Err(HalgError::LiftFailed(what.into()));
    }
    r.solve(a, b).ok_or_else(|| HalgError::LiftFailed(what.into()))
}

/// `⊕ R e_j`.
fn projective_term<R: Ring>(like: &FPModule<R>, idem: &[R::Elem]) -> FPModule<R> {
    let r = like.ring();
    FPModule::new(r.clone(), like.side(), idem.len(), r.term_relations(idem))
}

fn sum<R: Ring>(a: &FPModule<R>, b: &FPModule<R>) -> FPModule<R> {
    direct_sum(a, b).expect("summands share a ring").module
}

/// `0 -> C* -> B* -> A* -> 0` is exact for `A -f-> B -g-> C`.
fn dual_exact<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> bool {
    let da = dual_module(f.source());
    let db = dual_module(f.target());
    let dc = dual_module(g.target());
    let gs = dual_map_with(g, &db, &dc);
    let fs = dual_map_with(f, &da, &db);
    ShortExactSequence::new(gs, fs).verify().all()
}

fn ses_exact<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> bool {
    f.is_well_defined() && g.is_well_defined() && f.target() == g.source() && ShortExactSequence::new(f.clone(), g.clone()).verify().all()
}

/// `Ext^{d+1}(transpose(M), R)`.
pub fn obstruction_module<R: Ring>(m: &FPModule<R>, d: usize) -> FPModule<R> {
    let res = resolution(&transpose(m), d + 2);
    ext_from(&res, d + 1).value()
}

/// Instance hypotheses: `M` is `d`-torsionfree and `grade Ext^{d+1}(D M) >= d + 1`.
pub fn check_preconditions<R: Ring>(m: &FPModule<R>, d: usize, step: Option<usize>) -> Result<()> {
    let res = resolution(&transpose(m), d + 2);
    if let Some(i) = (1..=d).find(|&i| !ext_from(&res, i).is_zero()) {
        return Err(HalgError::PreconditionFailed {
            condition: Precondition::TorsionfreeLevel,
            index: i,
            step,
            message: format!("torsionfree_level(M) = {} < {d}", i - 1),
        });
    }
    let k = ext_from(&res, d + 1).value();
    if let Capped::Value(j) = grade(&k, d) {
        return Err(HalgError::PreconditionFailed {
            condition: Precondition::Grade,
            index: j as usize,
            step,
            message: format!("grade(Ext^{}(D(M), R)) = {j} < {}", d + 1, d + 1),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremChecks {
    pub exact: bool,
    pub dual_exact: bool,
    /// `torsionfree_level(C) >= d + 1`.
    pub c_syzygy: bool,
    /// `projective_dimension(B*) <= d - 1`.
    pub b_dual_pd: bool,
    /// `grade(Ext^{d+1}(D M)) >= d + 1`.
    pub grade: bool,
    /// `B` is the `d`-th syzygy of the stored resolution of `K ≅ Ext^{d+1}(D M)`.
    pub b_syzygy: bool,
}

impl TheoremChecks {
    pub fn all(&self) -> bool {
        self.exact && self.dual_exact && self.c_syzygy && self.b_dual_pd && self.grade && self.b_syzygy
    }
}

/// `0 -> B -alpha-> M ⊕ P -beta-> C -> 0`.
#[derive(Clone, Debug)]
pub struct TheoremCertificate<R: Ring> {
    pub module: FPModule<R>,
    pub d: usize,
    pub cap: usize,
    pub projective: FPModule<R>,
    pub middle: FPModule<R>,
    pub b: FPModule<R>,
    pub c: FPModule<R>,
    pub alpha: ModuleMap<R>,
    pub beta: ModuleMap<R>,
    /// `K`, isomorphic to `Ext^{d+1}(D M)`.
    pub ext_module: FPModule<R>,
    pub ext_resolution: Resolution<R>,
    pub checks: TheoremChecks,
}

impl<R: Ring> TheoremCertificate<R> {
    pub fn verify(&self) -> TheoremChecks {
        let d = self.d;
        let cap = self.cap;
        let shape = self.projective.is_projective()
            && self.middle == sum(&self.module, &self.projective)
            && self.alpha.source() == &self.b
            && self.alpha.target() == &self.middle
            && self.beta.target() == &self.c;
        let exact = shape && ses_exact(&self.alpha, &self.beta);
        let dual_exact = exact && dual_exact(&self.alpha, &self.beta);
        let c_syzygy = torsionfree_level(&self.c, cap) > d;
        let b_dual_pd = projective_dimension(&dual_module(&self.b).module, cap).at_most(d as i64 - 1);
        let obstruction = obstruction_module(&self.module, d);
        let grade_ok = grade(&obstruction, d + 1).at_least(d as i64 + 1);
        let res = &self.ext_resolution;
        let (z, _) = res.syzygy(d);
        let b_syzygy = res.module == self.ext_module
            && (res.len() >= d || res.terminated())
            && res.is_exact()
            && z == self.b
            && self.ext_module.invariant() == obstruction.invariant();
        TheoremChecks { exact, dual_exact, c_syzygy, b_dual_pd, grade: grade_ok, b_syzygy }
    }
}

struct Parts<R: Ring> {
    projective: FPModule<R>,
    b: FPModule<R>,
    c: FPModule<R>,
    alpha: Matrix<R::Elem>,
    beta: Matrix<R::Elem>,
    ext_module: FPModule<R>,
    ext_resolution: Resolution<R>,
}

fn step_zero<R: Ring>(m: &FPModule<R>) -> Parts<R> {
    let l = lemma21_sequence(m);
    let (c, epi, _) = image(&l.sigma);
    let b = l.ext1.clone();
    Parts {
        projective: FPModule::zero(m.ring().clone(), m.side()),
        ext_resolution: resolution(&b, 1),
        ext_module: b.clone(),
        b,
        c,
        alpha: l.incl.matrix().clone(),
        beta: epi.matrix().clone(),
    }
}

fn step_one<R: Ring>(m: &FPModule<R>) -> Result<Parts<R>> {
    let r = m.ring();
    let g = m.n_gens();
    let l = lemma21_sequence(m);
    let mss = l.double_dual.clone();
    let e = l.ext2.clone();
    let cover = r.projective_cover(e.n_gens(), e.relations());
    let t = cover.n_gens;
    let lambda = cover.epi;
    let p = projective_term(m, &cover.idempotents);
    // The pullback of M** -> E <- P splits as M ⊕ P.
    let to_e = ModuleMap::new_unchecked(p.clone(), e.clone(), lambda.clone());
    let pb = pullback(&l.proj, &to_e)?;
    let w_gens = pb.px.matrix().hstack(pb.py.matrix());
    let w_ambient = sum(&mss, &p);
    let sigma = l.sigma.matrix();
    let iota_rows = sigma.hstack(&r.zeros(g, t)).vstack(&lambda.hstack(&r.identity(t)));
    let iota_m = solve_rows(r, &w_gens.vstack(w_ambient.relations()), &iota_rows, "pullback splitting")?.col_range(0, w_gens.rows());
    let middle = sum(m, &p);
    let iota = ModuleMap::new_unchecked(middle.clone(), pb.module.clone(), iota_m);
    if !(iota.is_well_defined() && iota.is_iso()) {
        return Err(HalgError::LiftFailed("pullback is not M ⊕ P".into()));
    }
    let mut res_e =
        Resolution { module: e.clone(), augmentation: lambda.clone(), maps: Vec::new(), idempotents: vec![cover.idempotents], minimal: false };
    res_e.extend_to(2);
    let (b, b_incl) = res_e.syzygy(1);
    // b in ker(P -> E) goes to (-m', b) with sigma(m') = lambda(b).
    let pushed = r.mat_mul(&b_incl, &lambda);
    let m_part = solve_rows(r, &sigma.vstack(mss.relations()), &pushed, "syzygy of the cokernel of sigma")?.col_range(0, g);
    let alpha = r.mat_neg(&m_part).hstack(&b_incl);
    let beta = sigma.vstack(&lambda);
    Ok(Parts { projective: p, b, c: mss, alpha, beta, ext_module: e, ext_resolution: res_e })
}

fn step_high<R: Ring>(m: &FPModule<R>, d: usize) -> Result<Parts<R>> {
    let r = m.ring();
    let dual = dual_module(m);
    let ms = &dual.module;
    let op = ms.ring();
    let res_ms = resolution(ms, d);
    // Dualized resolution of M*: 0 -> M** -> P_0* -> ... -> P_{d-1}* -> N -> 0.
    let maps1: Vec<Matrix<R::Elem>> = (0..d - 1).map(|j| opposite_transfer(op, &res_ms.map(d - 2 - j))).collect();
    let idem1: Vec<Vec<R::Elem>> =
        (0..d).map(|j| res_ms.term_idempotents(d - 1 - j).iter().map(|e| op.op_elem(e)).collect()).collect();
    let n = FPModule::new(r.clone(), m.side(), idem1[0].len(), maps1[0].vstack(&r.term_relations(&idem1[0])));
    let mut res1 = Resolution { module: n.clone(), augmentation: r.term_identity(&idem1[0]), maps: maps1, idempotents: idem1, minimal: false };
    // The last map is the inclusion of M** = ker(P_0* -> P_1*).
    res1.extend_to(d);
    if !(res1.len() >= d || res1.terminated()) || !res1.is_exact() {
        return Err(HalgError::LiftFailed("dualized resolution is not exact".into()));
    }
    let (z1, _) = res1.syzygy(d);
    let ak = op.mat_mul(&res_ms.augmentation, &dual.generators);
    let span = res1.map(d - 1).vstack(&res1.term_relations(d - 1));
    let tau_m = solve_rows(r, &span, &opposite_transfer(op, &ak), "evaluation into the dualized resolution")?.col_range(0, res1.rank(d));
    let tau_m = r.canonical(&tau_m, None, &res1.term_idempotents(d));
    let tau = ModuleMap::new_unchecked(m.clone(), z1.clone(), tau_m);
    let tau_inv = tau.inverse().ok_or_else(|| HalgError::LiftFailed("M is not the d-th syzygy of N".into()))?;

    let ev = eval_map(&n);
    let (kmod, kincl) = kernel_module(&ev.sigma);
    let (y, yepi, _) = image(&ev.sigma);
    let res_k = resolution(&kmod, d + 1);
    let res_y = resolution(&y, d + 1);
    let hs = horseshoe(&kincl, &yepi, &res_k, &res_y, d + 1)?;
    let w = hs.resolution;
    let (ud, vd) = (res_k.rank(d), res_y.rank(d));
    let (b, _) = res_k.syzygy(d);
    let (zv, _) = res_y.syzygy(d);
    let incl = r.identity(ud).hstack(&r.zeros(ud, vd));
    let proj = r.zeros(ud, vd).vstack(&r.identity(vd));

    let bridge = schanuel_bridge(&res1, &w, d)?;
    let (q1, q2) = (bridge.q1.n_gens(), bridge.q2.n_gens());
    let p = bridge.q1.clone();
    let c = sum(&zv, &bridge.q2);
    let alpha = r.mat_mul(
        &r.mat_mul(&incl.hstack(&r.zeros(ud, q2)), bridge.psi.matrix()),
        &r.block_diag(tau_inv.matrix(), &r.identity(q1)),
    );
    let beta = r.mat_mul(
        &r.mat_mul(&r.block_diag(tau.matrix(), &r.identity(q1)), bridge.phi.matrix()),
        &r.block_diag(&proj, &r.identity(q2)),
    );
    Ok(Parts { projective: p, b, c, alpha, beta, ext_module: kmod, ext_resolution: res_k })
}

/// `0 -> B -> M ⊕ P -> C -> 0` with `B` a `d`-th syzygy of `Ext^{d+1}(D M)`,
/// `C` a `(d+1)`-st syzygy, `pd(B*) <= d - 1`, dual exact.
pub fn theorem_sequence<R: Ring>(m: &FPModule<R>, d: usize) -> Result<TheoremCertificate<R>> {
    theorem_step(m, d, None)
}

fn theorem_step<R: Ring>(m: &FPModule<R>, d: usize, step: Option<usize>) -> Result<TheoremCertificate<R>> {
    check_preconditions(m, d, step)?;
    let parts = match d {
        0 => step_zero(m),
        1 => step_one(m)?,
        _ => step_high(m, d)?,
    };
    let middle = sum(m, &parts.projective);
    let alpha = ModuleMap::new_unchecked(parts.b.clone(), middle.clone(), parts.alpha);
    let beta = ModuleMap::new_unchecked(middle.clone(), parts.c.clone(), parts.beta);
    let mut cert = TheoremCertificate {
        module: m.clone(),
        d,
        cap: cap_for(d),
        projective: parts.projective,
        middle,
        b: parts.b,
        c: parts.c,
        alpha,
        beta,
        ext_module: parts.ext_module,
        ext_resolution: parts.ext_resolution,
        checks: TheoremChecks { exact: false, dual_exact: false, c_syzygy: false, b_dual_pd: false, grade: false, b_syzygy: false },
    };
    cert.checks = cert.verify();
    Ok(cert)
}

/// Both descriptions of the module whose syzygy `B_d` is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTransport {
    pub d: usize,
    /// Invariant of the `K` used in step `d`.
    pub k: ModuleInvariant,
    /// `Ext^{d+1}(D M)` for the input `M`.
    pub ext_transpose: ModuleInvariant,
    /// `Ext^{d-1}(M*)` for `d >= 2`.
    pub ext_dual: Option<ModuleInvariant>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainChecks {
    pub steps: bool,
    /// Each `0 -> B_i -> M_i -> M_{i+1} -> 0` is exact and dual exact.
    pub epis_dual_exact: bool,
    /// `torsionfree_level(M_i) >= i`.
    pub syzygy_levels: bool,
    /// `projective_dimension(B_i*) <= i - 1`.
    pub b_dual_pd: bool,
    /// `Ext^{i+1}(D C_i) ≅ Ext^{i+1}(D M)`, and `≅ Ext^{i-1}(M*)` for `i >= 2`.
    pub ext_transport: bool,
}

impl ChainChecks {
    pub fn all(&self) -> bool {
        self.steps && self.epis_dual_exact && self.syzygy_levels && self.b_dual_pd && self.ext_transport
    }
}

/// `M ⊕ P = M_0 -> M_1 -> ... -> M_k` with kernels `B_0, ..., B_{k-1}`.
#[derive(Clone, Debug)]
pub struct ChainCertificate<R: Ring> {
    pub module: FPModule<R>,
    pub k: usize,
    pub cap: usize,
    pub projective: FPModule<R>,
    pub terms: Vec<FPModule<R>>,
    pub epis: Vec<ModuleMap<R>>,
    pub kernels: Vec<ModuleMap<R>>,
    pub steps: Vec<TheoremCertificate<R>>,
    pub transport: Vec<ExtTransport>,
    pub checks: ChainChecks,
}

impl<R: Ring> ChainCertificate<R> {
    pub fn b(&self, i: usize) -> &FPModule<R> {
        self.kernels[i].source()
    }

    pub fn verify(&self) -> ChainChecks {
        let k = self.k;
        let cap = self.cap;
        let steps = self.steps.len() == k && self.steps.iter().all(|s| s.verify().all());
        let shape = self.terms.len() == k + 1
            && self.epis.len() == k
            && self.kernels.len() == k
            && self.projective.is_projective()
            && self.terms[0] == sum(&self.module, &self.projective)
            && (0..k).all(|i| self.epis[i].source() == &self.terms[i] && self.epis[i].target() == &self.terms[i + 1]);
        let epis_dual_exact =
            shape && (0..k).all(|i| ses_exact(&self.kernels[i], &self.epis[i]) && dual_exact(&self.kernels[i], &self.epis[i]));
        let syzygy_levels = self.terms.iter().enumerate().all(|(i, t)| torsionfree_level(t, cap.max(i)) >= i);
        let b_dual_pd = (0..k).all(|i| projective_dimension(&dual_module(self.b(i)).module, cap).at_most(i as i64 - 1));
        let recomputed = ext_transport_data(&self.module, &self.steps);
        let ext_transport = recomputed == self.transport
            && recomputed.iter().all(|t| t.k == t.ext_transpose && t.ext_dual.as_ref().is_none_or(|e| e == &t.k));
        ChainChecks { steps, epis_dual_exact, syzygy_levels, b_dual_pd, ext_transport }
    }
}

fn ext_transport_data<R: Ring>(m: &FPModule<R>, steps: &[TheoremCertificate<R>]) -> Vec<ExtTransport> {
    let ms = dual_module(m).module;
    let last = steps.len().saturating_sub(1);
    let res_ms = resolution(&ms, last.max(1));
    steps
        .iter()
        .map(|s| {
            let d = s.d;
            ExtTransport {
                d,
                k: s.ext_module.invariant(),
                ext_transpose: obstruction_module(m, d).invariant(),
                ext_dual: (d >= 2).then(|| ext_from(&res_ms, d - 1).value().invariant()),
            }
        })
        .collect()
}

fn relabel_step(e: HalgError, i: usize) -> HalgError {
    match e {
        HalgError::PreconditionFailed { condition, index, step: None, message } => {
            HalgError::PreconditionFailed { condition, index, step: Some(i), message }
        }
        other => other,
    }
}

pub fn spherical_chain<R: Ring>(m: &FPModule<R>, k: usize) -> Result<ChainCertificate<R>> {
    let r = m.ring();
    let mut steps: Vec<TheoremCertificate<R>> = Vec::with_capacity(k);
    let mut current = m.clone();
    for d in 0..k {
        let cert = theorem_step(&current, d, Some(d)).map_err(|e| relabel_step(e, d))?;
        current = cert.c.clone();
        steps.push(cert);
    }
    // tail[i] = P_i ⊕ ... ⊕ P_{k-1}
    let mut tail = vec![FPModule::zero(r.clone(), m.side()); k + 1];
    for i in (0..k).rev() {
        tail[i] = sum(&steps[i].projective, &tail[i + 1]);
    }
    let mut terms = Vec::with_capacity(k + 1);
    for i in 0..k {
        terms.push(sum(&steps[i].middle, &tail[i + 1]));
    }
    terms.push(if k == 0 { m.clone() } else { steps[k - 1].c.clone() });
    let mut epis = Vec::with_capacity(k);
    let mut kernels = Vec::with_capacity(k);
    for i in 0..k {
        let t = tail[i + 1].n_gens();
        let beta = r.block_diag(steps[i].beta.matrix(), &r.identity(t));
        epis.push(ModuleMap::new_unchecked(terms[i].clone(), terms[i + 1].clone(), beta));
        let a = &steps[i].alpha;
        let alpha = a.matrix().hstack(&r.zeros(a.matrix().rows(), t));
        kernels.push(ModuleMap::new_unchecked(a.source().clone(), terms[i].clone(), alpha));
    }
    let projective = tail[0].clone();
    let transport = ext_transport_data(m, &steps);
    let mut cert = ChainCertificate {
        module: m.clone(),
        k,
        cap: cap_for(k),
        projective,
        terms,
        epis,
        kernels,
        steps,
        transport,
        checks: ChainChecks { steps: false, epis_dual_exact: false, syzygy_levels: false, b_dual_pd: false, ext_transport: false },
    };
    cert.checks = cert.verify();
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxChecks {
    pub exact: bool,
    pub dual_exact: bool,
    /// `projective_dimension(Y) <= k - 2`.
    pub y_pd: bool,
    /// The middle term is `T** ⊕ P*` up to invariants.
    pub middle: bool,
    /// `Ext^i(Y) -> Ext^i(T** ⊕ P*)` is an isomorphism for `1 <= i <= k - 2`.
    pub ext_isos: bool,
    /// Stable Hom into each admissible test module is preserved.
    pub stable_hom: bool,
}

impl ApproxChecks {
    pub fn all(&self) -> bool {
        self.exact && self.dual_exact && self.y_pd && self.middle && self.ext_isos && self.stable_hom
    }
}

/// Result of a stable Hom comparison against one test module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableHomCheck {
    pub test: usize,
    /// `None` when the test module has `pd > k - 2` and is skipped.
    pub iso: Option<bool>,
}

/// `0 -> X -> T** ⊕ P -> Y -> 0` for a module `T` over the opposite ring.
#[derive(Clone, Debug)]
pub struct ApproxCertificate<R: Ring> {
    pub module: FPModule<R>,
    pub k: usize,
    pub cap: usize,
    pub chain: ChainCertificate<R>,
    pub double_dual: FPModule<R>,
    pub x: FPModule<R>,
    pub middle: FPModule<R>,
    pub y: FPModule<R>,
    pub f: ModuleMap<R>,
    pub g: ModuleMap<R>,
    pub tests: Vec<FPModule<R>>,
    pub stable: Vec<StableHomCheck>,
    pub checks: ApproxChecks,
}

fn stable_iso<R: Ring>(g: &ModuleMap<R>, h: &FPModule<R>) -> Result<bool> {
    let from = stable_hom(g.target(), h)?;
    let to = stable_hom(g.source(), h)?;
    let m = StableHom::induced(g, &from, &to)?;
    Ok(m.is_well_defined() && m.is_iso())
}

fn stable_checks<R: Ring>(g: &ModuleMap<R>, tests: &[FPModule<R>], k: usize, cap: usize) -> Vec<StableHomCheck> {
    tests
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let admissible = h.same_category(g.target()) && projective_dimension(h, cap).at_most(k as i64 - 2);
            let iso = admissible.then(|| stable_iso(g, h).unwrap_or(false));
            StableHomCheck { test: i, iso }
        })
        .collect()
}

impl<R: Ring> ApproxCertificate<R> {
    pub fn verify(&self) -> ApproxChecks {
        let k = self.k;
        let exact = self.f.source() == &self.x && self.g.target() == &self.y && ses_exact(&self.f, &self.g);
        let dual_exact = exact && dual_exact(&self.f, &self.g);
        let y_pd = projective_dimension(&self.y, self.cap).at_most(k as i64 - 2);
        let tss = dual_module(&dual_module(&self.module).module).module;
        let pstar = dual_module(&self.chain.projective).module;
        let middle = tss == self.double_dual
            && direct_sum(&tss, &pstar).map(|s| s.module.invariant() == self.middle.invariant()).unwrap_or(false);
        let ext_isos = (1..=k.saturating_sub(2)).all(|i| match ext_map(&self.g, i) {
            Ok((_, _, m)) => m.is_well_defined() && m.is_iso(),
            Err(_) => false,
        });
        let stable = stable_checks(&self.g, &self.tests, k, self.cap);
        let stable_hom = stable == self.stable && stable.iter().all(|s| s.iso != Some(false));
        ApproxChecks { exact, dual_exact, y_pd, middle, ext_isos, stable_hom }
    }
}

pub fn approximation<R: Ring>(t: &FPModule<R>, k: usize, tests: &[FPModule<R>]) -> Result<ApproxCertificate<R>> {
    if k < 2 {
        return Err(HalgError::KTooSmall(k));
    }
    let ts = dual_module(t).module;
    let chain = spherical_chain(&ts, k)?;
    let duals: Vec<DualData<R>> = chain.terms.iter().map(dual_module).collect();
    let b_duals: Vec<DualData<R>> = (0..k).map(|i| dual_module(chain.b(i))).collect();
    let epi_dual = |i: usize| dual_map_with(&chain.epis[i], &duals[i], &duals[i + 1]);
    let ker_dual = |i: usize| dual_map_with(&chain.kernels[i], &b_duals[i], &duals[i]);
    // 0 -> M_2* -> M_1* -> B_1* -> 0, then successive pushouts along B_{j+1}*.
    let mut f = epi_dual(1);
    let mut g = ker_dual(1);
    for j in 1..=k - 2 {
        let po = pushout(&f, &ker_dual(j + 1))?;
        g = po.ix;
        f = epi_dual(j + 1).then(&f);
    }
    let cap = cap_for(k);
    let stable = stable_checks(&g, tests, k, cap);
    let mut cert = ApproxCertificate {
        module: t.clone(),
        k,
        cap,
        double_dual: dual_module(&ts).module,
        x: f.source().clone(),
        middle: f.target().clone(),
        y: g.target().clone(),
        f,
        g,
        chain,
        tests: tests.to_vec(),
        stable,
        checks: ApproxChecks { exact: false, dual_exact: false, y_pd: false, middle: false, ext_isos: false, stable_hom: false },
    };
    cert.checks = cert.verify();
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgChecks {
    /// `0 -> S -> B ⊕ Q -> M -> 0`.
    pub exact: bool,
    /// `0 -> S -> P ⊕ Q -> C -> 0`.
    pub top_exact: bool,
    /// `torsionfree_level(S) >= d + 2`.
    pub s_syzygy: bool,
    pub theorem: bool,
}

impl EgChecks {
    pub fn all(&self) -> bool {
        self.exact && self.top_exact && self.s_syzygy && self.theorem
    }
}

#[derive(Clone, Debug)]
pub struct EgCertificate<R: Ring> {
    pub theorem: TheoremCertificate<R>,
    pub q: FPModule<R>,
    pub delta: ModuleMap<R>,
    pub s: FPModule<R>,
    /// `S -> B ⊕ Q`.
    pub s_incl: ModuleMap<R>,
    /// `(gamma, delta): B ⊕ Q -> M`.
    pub cover: ModuleMap<R>,
    /// `S -> P ⊕ Q`.
    pub top_in: ModuleMap<R>,
    /// `P ⊕ Q -> C`.
    pub top_out: ModuleMap<R>,
    pub s_level: usize,
    pub checks: EgChecks,
}

impl<R: Ring> EgCertificate<R> {
    pub fn verify(&self) -> EgChecks {
        let th = &self.theorem;
        let d = th.d;
        let shape = self.q.is_projective()
            && self.delta.target() == &th.module
            && self.delta.is_surjective()
            && self.cover.source() == &sum(&th.b, &self.q)
            && self.top_in.target() == &sum(&th.projective, &self.q)
            && self.top_out.target() == &th.c;
        let exact = shape && self.s_incl.source() == &self.s && ses_exact(&self.s_incl, &self.cover);
        let top_exact = shape && self.top_in.source() == &self.s && ses_exact(&self.top_in, &self.top_out);
        let level = torsionfree_level(&self.s, th.cap.max(d + 2));
        EgChecks { exact, top_exact, s_syzygy: level >= d + 2 && level == self.s_level, theorem: th.verify().all() }
    }
}

/// `0 -> S -> B ⊕ Q -> M -> 0` with `delta: Q -> M` the projective cover.
pub fn evans_griffith<R: Ring>(m: &FPModule<R>, d: usize) -> Result<EgCertificate<R>> {
    let r = m.ring();
    let cov = r.projective_cover(m.n_gens(), m.relations());
    let q = FPModule::new(r.clone(), m.side(), cov.n_gens, cov.relations);
    let delta = ModuleMap::new_unchecked(q, m.clone(), cov.epi);
    evans_griffith_with(m, d, &delta)
}

/// As `evans_griffith` for a caller-supplied projective surjection `delta: Q -> M`.
pub fn evans_griffith_with<R: Ring>(m: &FPModule<R>, d: usize, delta: &ModuleMap<R>) -> Result<EgCertificate<R>> {
    let r = m.ring();
    let theorem = theorem_sequence(m, d)?;
    let g = m.n_gens();
    let p = theorem.projective.n_gens();
    let q = delta.source().clone();
    let a = theorem.alpha.matrix();
    let gamma = a.col_range(0, g);
    let alpha_p = a.col_range(g, g + p);
    let bq = sum(&theorem.b, &q);
    let cover = ModuleMap::new_unchecked(bq, m.clone(), gamma.vstack(delta.matrix()));
    let (s, s_incl) = kernel_module(&cover);
    let pq = sum(&theorem.projective, &q);
    let top_in = ModuleMap::new_unchecked(
        s.clone(),
        pq.clone(),
        r.mat_mul(s_incl.matrix(), &r.block_diag(&alpha_p, &r.identity(q.n_gens()))),
    );
    let bm = theorem.beta.matrix();
    let beta_m = bm.row_range(0, g);
    let beta_p = bm.row_range(g, g + p);
    let out = beta_p.vstack(&r.mat_neg(&r.mat_mul(delta.matrix(), &beta_m)));
    let top_out = ModuleMap::new_unchecked(pq, theorem.c.clone(), out);
    let s_level = torsionfree_level(&s, theorem.cap.max(d + 2));
    let mut cert = EgCertificate {
        theorem,
        q,
        delta: delta.clone(),
        s,
        s_incl,
        cover,
        top_in,
        top_out,
        s_level,
        checks: EgChecks { exact: false, top_exact: false, s_syzygy: false, theorem: false },
    };
    cert.checks = cert.verify();
    Ok(cert)
}
