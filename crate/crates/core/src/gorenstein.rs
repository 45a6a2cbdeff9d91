//! Ring-level classification: minimal injective resolutions of the right
//! regular module, flat dimensions of their terms, and grade spot checks.

use crate::error::{HalgError, Result};
use crate::fdalgebra::FdRing;
use crate::fdmodule::{injective_envelope, is_injective_module, vdual};
use crate::homology::{ext, grade, projective_dimension, syzygy, torsionfree_level, Capped};
use crate::module::{cokernel, FPModule, ModuleMap};
use crate::ring::{BackendKind, ModuleInvariant, Ring, Side};

/// `0 -> Λ_Λ -> I_1 -> I_2 -> ... -> I_k`, with `Λ_Λ` a left module over the opposite algebra.
#[derive(Clone, Debug)]
pub struct InjectiveResolution {
    pub regular: FPModule<FdRing>,
    /// `terms[i - 1] = I_i`.
    pub terms: Vec<FPModule<FdRing>>,
    /// `monos[i - 1]: C_{i-1} -> I_i` with `C_0 = Λ_Λ` and `C_i = coker(monos[i - 1])`.
    pub monos: Vec<ModuleMap<FdRing>>,
    /// `cosyzygies[i] = C_i`.
    pub cosyzygies: Vec<FPModule<FdRing>>,
    /// `projections[i - 1]: I_i -> C_i`.
    pub projections: Vec<ModuleMap<FdRing>>,
    /// Essential-extension certificate of each envelope.
    pub essential: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectiveChecks {
    pub injective_terms: bool,
    pub exact: bool,
    pub essential: bool,
}

impl InjectiveChecks {
    pub fn all(&self) -> bool {
        self.injective_terms && self.exact && self.essential
    }
}

impl InjectiveResolution {
    pub fn k(&self) -> usize {
        self.terms.len()
    }

    /// `d_i: I_i -> I_{i+1}` for `1 <= i < k`.
    pub fn differential(&self, i: usize) -> ModuleMap<FdRing> {
        self.projections[i - 1].then(&self.monos[i])
    }

    pub fn verify(&self) -> InjectiveChecks {
        let injective_terms = self.terms.iter().all(is_injective_module);
        let exact = (0..self.k()).all(|i| {
            let mono = &self.monos[i];
            let proj = &self.projections[i];
            let (c, _) = cokernel(mono);
            mono.is_well_defined()
                && mono.is_injective()
                && proj.is_well_defined()
                && proj.is_surjective()
                && mono.then(proj).is_zero()
                && c.invariant() == self.cosyzygies[i + 1].invariant()
                && mono.source() == &self.cosyzygies[i]
        });
        let essential = self.essential.iter().all(|&e| e)
            && (0..self.k()).all(|i| socle_dim(&self.cosyzygies[i]) == socle_dim(&self.terms[i]));
        InjectiveChecks { injective_terms, exact, essential }
    }
}

fn socle_dim(m: &FPModule<FdRing>) -> usize {
    crate::fdmodule::FdModuleData::from_module(m).socle_dim()
}

/// `Λ` as a right module over itself.
pub fn right_regular(r: &FdRing) -> FPModule<FdRing> {
    FPModule::free(r.opposite(), Side::Right, 1)
}

fn unavailable<R: Ring>(r: &R) -> HalgError {
    let note = match r.kind() {
        BackendKind::Integers => "; the integers are known to be 1-Gorenstein",
        _ => "",
    };
    HalgError::CapabilityUnavailable(format!("minimal injective resolutions are not computable over {:?}{note}", r.kind()))
}

/// Iterated injective envelopes and cokernels, `k` terms.
pub fn min_injective_resolution(r: &FdRing, k: usize) -> InjectiveResolution {
    let regular = right_regular(r);
    let mut cur = regular.clone();
    let mut out = InjectiveResolution {
        regular: regular.clone(),
        terms: Vec::with_capacity(k),
        monos: Vec::with_capacity(k),
        cosyzygies: vec![regular],
        projections: Vec::with_capacity(k),
        essential: Vec::with_capacity(k),
    };
    for _ in 0..k {
        let env = injective_envelope(&cur);
        let (c, proj) = cokernel(&env.mono);
        let min = c.minimal_presentation();
        let proj = proj.then(&min.to_min);
        out.terms.push(env.module.clone());
        out.monos.push(env.mono);
        out.essential.push(env.essential);
        out.projections.push(proj);
        out.cosyzygies.push(min.module.clone());
        cur = min.module;
    }
    out
}

#[derive(Clone, Debug)]
pub struct GorensteinReport {
    pub ring: FdRing,
    pub k: usize,
    pub cap: usize,
    pub resolution: InjectiveResolution,
    /// `fd[i - 1] = fd(I_i)`, `None` for a zero term.
    pub fd: Vec<Option<usize>>,
    pub quasi_k_gorenstein: bool,
    pub k_gorenstein: bool,
    pub indexing: &'static str,
}

pub const INDEXING_NOTE: &str = "terms are indexed I_1, I_2, ...; quasi-k-Gorenstein means fd(I_i) <= i and k-Gorenstein fd(I_i) <= i - 1 for 1 <= i <= k";

fn verdicts(fd: &[Option<usize>]) -> (bool, bool) {
    let quasi = fd.iter().enumerate().all(|(i, f)| f.is_none_or(|f| f <= i + 1));
    let k_gor = fd.iter().enumerate().all(|(i, f)| f.is_none_or(|f| f <= i));
    (quasi, k_gor)
}

fn flat_dimensions(res: &InjectiveResolution, cap: usize) -> Result<Vec<Option<usize>>> {
    res.terms
        .iter()
        .enumerate()
        .map(|(i, t)| match projective_dimension(t, cap) {
            Capped::Value(v) if v < 0 => Ok(None),
            Capped::Value(v) => Ok(Some(v as usize)),
            Capped::AtLeast(_) => Err(HalgError::Inconclusive(i + 1)),
        })
        .collect()
}

/// Flat dimensions (as projective dimensions) of `I_1 .. I_k` and the verdicts.
pub fn classify(r: &FdRing, k: usize, cap: usize) -> Result<GorensteinReport> {
    if k == 0 {
        return Err(HalgError::InvalidArgument("k must be at least 1".into()));
    }
    let resolution = min_injective_resolution(r, k);
    let fd = flat_dimensions(&resolution, cap)?;
    let (quasi_k_gorenstein, k_gorenstein) = verdicts(&fd);
    Ok(GorensteinReport { ring: r.clone(), k, cap, resolution, fd, quasi_k_gorenstein, k_gorenstein, indexing: INDEXING_NOTE })
}

/// `classify` for any backend; backends without injectives report the capability gap.
pub fn classify_ring<R: Ring>(r: &R, fd: Option<&FdRing>, k: usize, cap: usize) -> Result<GorensteinReport> {
    match fd {
        Some(a) if r.has_injectives() => classify(a, k, cap),
        _ => Err(unavailable(r)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinChecks {
    pub resolution: bool,
    pub fd_rederived: bool,
    pub verdicts: bool,
    pub implication: bool,
    /// Dimension vectors of `I_i` and of `D(P_{i-1})` for the minimal
    /// projective resolution `P` of `D(Λ_Λ)` agree.
    pub duality: bool,
}

impl GorensteinChecks {
    pub fn all(&self) -> bool {
        self.resolution && self.fd_rederived && self.verdicts && self.implication && self.duality
    }
}

fn dimension_vector(m: &FPModule<FdRing>) -> Vec<usize> {
    match m.invariant() {
        ModuleInvariant::Fd { dimension_vector, .. } => dimension_vector,
        ModuleInvariant::Abelian(_) => Vec::new(),
    }
}

impl GorensteinReport {
    pub fn verify(&self) -> GorensteinChecks {
        let resolution = self.resolution.k() == self.k && self.resolution.verify().all();
        let fd_rederived = flat_dimensions(&self.resolution, self.cap).is_ok_and(|fd| fd == self.fd);
        let (q, g) = verdicts(&self.fd);
        let verdicts = q == self.quasi_k_gorenstein && g == self.k_gorenstein;
        let implication = !self.k_gorenstein || self.quasi_k_gorenstein;
        let dreg = vdual(&right_regular(&self.ring));
        let pres = crate::homology::resolution(&dreg, self.k);
        let duality = (0..self.k).all(|i| dimension_vector(&self.resolution.terms[i]) == dimension_vector(&vdual(&pres.term(i))));
        GorensteinChecks { resolution, fd_rederived, verdicts, implication, duality }
    }
}

/// A sample and index at which the grade condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `grade Ext^{i+1}(N, R) < i`.
    Grade { sample: usize, i: usize, grade: usize },
    /// `torsionfree_level(Ω^i M) < i`.
    Syzygy { sample: usize, i: usize, level: usize },
}

#[derive(Clone, Debug)]
pub struct SpotcheckReport {
    pub k: usize,
    pub samples: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl SpotcheckReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Instance checks of the grade form of quasi-k-Gorenstein on `samples`.
pub fn grade_spotcheck<R: Ring>(k: usize, samples: &[FPModule<R>]) -> SpotcheckReport {
    let mut violations = Vec::new();
    let mut checks = 0;
    for (s, n) in samples.iter().enumerate() {
        for i in 1..k {
            checks += 1;
            let e = ext(n, i + 1).value();
            if let Capped::Value(g) = grade(&e, i - 1) {
                violations.push(Violation::Grade { sample: s, i, grade: g as usize });
            }
        }
        for i in 1..=k {
            checks += 1;
            let (z, _) = syzygy(n, i);
            let level = torsionfree_level(&z, i);
            if level < i {
                violations.push(Violation::Syzygy { sample: s, i, level });
            }
        }
    }
    SpotcheckReport { k, samples: samples.len(), checks, violations }
}
