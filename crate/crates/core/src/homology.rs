//! Projective resolutions, duals, the evaluation map, the transpose, Ext, grade,
//! torsionfree level and projective dimension.

use std::fmt;

use crate::module::{is_exact_at, kernel_module, quotient_of_span, subquotient, FPModule, ModuleMap};
use crate::ring::{opposite_transfer, Matrix, Ring};

/// A value computed up to a cap: exact, or known to exceed the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Capped {
    Value(i64),
    /// At least this value (the cap plus one).
    AtLeast(i64),
}

impl Capped {
    pub fn at_most(self, bound: i64) -> bool {
        matches!(self, Capped::Value(v) if v <= bound)
    }

    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Capped::Value(v) => v >= bound,
            Capped::AtLeast(v) => v >= bound,
        }
    }

    pub fn value(self) -> Option<i64> {
        match self {
            Capped::Value(v) => Some(v),
            Capped::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Capped {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capped::Value(v) => write!(f, "{v}"),
            Capped::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// `... -> F_1 -> F_0 -> M -> 0` with projective terms `F_i = ⊕_j R e_ij`.
#[derive(Clone, Debug)]
pub struct Resolution<R: Ring> {
    pub module: FPModule<R>,
    /// `n_0 x g`: images in `M` of the generators of `F_0`.
    pub augmentation: Matrix<R::Elem>,
    /// `maps[i]: F_{i+1} -> F_i`.
    pub maps: Vec<Matrix<R::Elem>>,
    /// `idempotents[i][j] = e_ij`, for every computed term.
    pub idempotents: Vec<Vec<R::Elem>>,
    pub minimal: bool,
}

impl<R: Ring> Resolution<R> {
    pub fn ring(&self) -> &R {
        self.module.ring()
    }

    pub fn rank(&self, i: usize) -> usize {
        if i == 0 {
            self.augmentation.rows()
        } else if i <= self.maps.len() {
            self.maps[i - 1].rows()
        } else {
            0
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.maps.len()).map(|i| self.rank(i)).collect()
    }

    /// Number of maps computed.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Whether the resolution is known to stop (a zero term was reached).
    pub fn terminated(&self) -> bool {
        self.rank(self.maps.len()) == 0
    }

    /// Map `F_{i+1} -> F_i`, or the zero map out of the zero module past the end.
    pub fn map(&self, i: usize) -> Matrix<R::Elem> {
        if i < self.maps.len() {
            self.maps[i].clone()
        } else {
            self.ring().zeros(0, self.rank(i))
        }
    }

    pub fn term_idempotents(&self, i: usize) -> Vec<R::Elem> {
        match self.idempotents.get(i) {
            Some(e) if e.len() == self.rank(i) => e.clone(),
            _ => vec![self.ring().one(); self.rank(i)],
        }
    }

    pub fn term_relations(&self, i: usize) -> Matrix<R::Elem> {
        self.ring().term_relations(&self.term_idempotents(i))
    }

    /// `F_i` as a module.
    pub fn term(&self, i: usize) -> FPModule<R> {
        FPModule::new(self.ring().clone(), self.module.side(), self.rank(i), self.term_relations(i))
    }

    /// Minimal generators of `ker(F_i -> F_{i-1})` (or of `ker(F_0 -> M)`) with their idempotents.
    fn kernel_at(&self, i: usize) -> (Matrix<R::Elem>, Vec<R::Elem>) {
        let r = self.ring();
        let n = self.rank(i);
        let stacked = if i == 0 {
            self.augmentation.vstack(self.module.relations())
        } else {
            self.map(i - 1).vstack(&self.term_relations(i - 1))
        };
        if n == 0 {
            return (r.zeros(0, 0), Vec::new());
        }
        let k = r.kernel_gens(&stacked);
        if k.rows() == 0 || k.cols() < n {
            return (r.zeros(0, n), Vec::new());
        }
        let k = r.canonical(&k.col_range(0, n), None, &self.term_idempotents(i));
        let k = r.reduce_generators(&k);
        let idem = k.row_iter().map(|row| r.row_idempotent(row)).collect();
        (k, idem)
    }

    /// Extend to at least `len` maps (stops early at a zero term).
    pub fn extend_to(&mut self, len: usize) {
        while self.idempotents.len() <= self.maps.len() {
            let i = self.idempotents.len();
            self.idempotents.push(vec![self.ring().one(); self.rank(i)]);
        }
        while self.maps.len() < len && !(self.maps.last().is_some_and(|m| m.rows() == 0)) {
            let i = self.maps.len();
            let (k, idem) = self.kernel_at(i);
            self.maps.push(k);
            self.idempotents.push(idem);
        }
        if self.minimal {
            self.minimal = self.maps.iter().all(|m| m.entries().iter().all(|x| self.ring().in_radical(x)));
        }
    }

    /// The `d`-th syzygy `Z_d = im(F_d -> F_{d-1})`, presented on `F_d`, with
    /// its inclusion matrix into `F_{d-1}` (`Z_0 = M`).
    pub fn syzygy(&self, d: usize) -> (FPModule<R>, Matrix<R::Elem>) {
        let r = self.ring();
        if d == 0 {
            return (self.module.clone(), r.identity(self.module.n_gens()));
        }
        let n = self.rank(d);
        let rel = if d < self.maps.len() { self.maps[d].clone() } else { self.kernel_at(d).0 };
        let rel = if rel.cols() != n { r.zeros(0, n) } else { rel };
        let rel = rel.vstack(&self.term_relations(d));
        (FPModule::new(r.clone(), self.module.side(), n, rel), self.map(d - 1))
    }

    /// The maps are well defined, consecutive composites vanish and the
    /// augmentation is surjective.
    pub fn is_complex(&self) -> bool {
        let r = self.ring();
        let m = &self.module;
        let aug = ModuleMap::new_unchecked(self.term(0), m.clone(), self.augmentation.clone());
        if !aug.is_well_defined() || !aug.is_surjective() {
            return false;
        }
        if !self.maps.is_empty() && !m.rows_vanish(&r.mat_mul(&self.maps[0], &self.augmentation)) {
            return false;
        }
        let defined = (0..self.maps.len()).all(|i| ModuleMap::new_unchecked(self.term(i + 1), self.term(i), self.maps[i].clone()).is_well_defined());
        defined
            && (1..self.maps.len())
                .all(|i| self.maps[i].rows() == 0 || self.term(i - 1).rows_vanish(&r.mat_mul(&self.maps[i], &self.maps[i - 1])))
    }

    /// Exactness at every computed term.
    pub fn is_exact(&self) -> bool {
        if !self.is_complex() {
            return false;
        }
        let r = self.ring();
        (0..self.maps.len()).all(|i| {
            let (k, _) = self.kernel_at(i);
            let span = self.maps[i].vstack(&self.term_relations(i));
            k.rows() == 0 || span.rows() > 0 && r.solve(&span, &k).is_some()
        })
    }
}

/// Resolution starting from the given presentation: `F_0 = R^g`, `F_1 -> F_0` the relations.
pub fn resolve_presentation<R: Ring>(m: &FPModule<R>, len: usize) -> Resolution<R> {
    let r = m.ring();
    let mut res = Resolution {
        module: m.clone(),
        augmentation: r.identity(m.n_gens()),
        maps: Vec::new(),
        idempotents: vec![vec![r.one(); m.n_gens()]],
        minimal: false,
    };
    if len > 0 {
        res.maps.push(m.relations().clone());
        res.idempotents.push(vec![r.one(); m.relations().rows()]);
    }
    if m.relations().rows() > 0 {
        res.extend_to(len);
    }
    res
}

/// Resolution built from projective covers; flagged minimal when every map
/// has radical entries.
pub fn resolution<R: Ring>(m: &FPModule<R>, len: usize) -> Resolution<R> {
    let r = m.ring();
    let cover = r.projective_cover(m.n_gens(), m.relations());
    let mut res = Resolution { module: m.clone(), augmentation: cover.epi, maps: Vec::new(), idempotents: vec![cover.idempotents], minimal: true };
    res.extend_to(len);
    res.minimal = res.maps.iter().all(|a| a.entries().iter().all(|x| r.in_radical(x)));
    res
}

/// The `d`-th syzygy of `M` from its resolution, with inclusion into `F_{d-1}`.
pub fn syzygy<R: Ring>(m: &FPModule<R>, d: usize) -> (FPModule<R>, Matrix<R::Elem>) {
    resolution(m, d + 1).syzygy(d)
}

/// `M* = Hom(M, R)` as a submodule of `(R^op)^g`.
#[derive(Clone, Debug)]
pub struct DualData<R: Ring> {
    pub module: FPModule<R>,
    /// Rows: functionals generating `M*`, written as vectors over the generators of `M`.
    pub generators: Matrix<R::Elem>,
}

impl<R: Ring> DualData<R> {
    /// Pairing `<m_i, phi_k>` as a `g x s` matrix over the ring of `M`.
    pub fn pairing(&self) -> Matrix<R::Elem> {
        opposite_transfer(self.module.ring(), &self.generators)
    }
}

pub fn dual_module<R: Ring>(m: &FPModule<R>) -> DualData<R> {
    let r = m.ring();
    let op = r.opposite();
    let g = m.n_gens();
    let side = m.side().flip();
    if g == 0 {
        return DualData { module: FPModule::zero(op.clone(), side), generators: op.zeros(0, 0) };
    }
    let dualized = opposite_transfer(r, m.relations());
    let k = op.kernel_gens(&dualized);
    let k = if k.cols() != g { op.zeros(0, g) } else { k };
    let module = quotient_of_span(&op, side, &k, &op.zeros(0, g));
    DualData { module, generators: k }
}

/// `f*: Y* -> X*` for `f: X -> Y`.
pub fn dual_map<R: Ring>(f: &ModuleMap<R>) -> ModuleMap<R> {
    let dx = dual_module(f.source());
    let dy = dual_module(f.target());
    dual_map_with(f, &dx, &dy)
}

pub fn dual_map_with<R: Ring>(f: &ModuleMap<R>, dx: &DualData<R>, dy: &DualData<R>) -> ModuleMap<R> {
    let op = dx.module.ring();
    let pulled = op.mat_mul(&dy.generators, &opposite_transfer(f.ring(), f.matrix()));
    let m = if pulled.rows() == 0 {
        op.zeros(0, dx.generators.rows())
    } else {
        op.solve(&dx.generators, &pulled).expect("pulled-back functionals lie in the dual")
    };
    ModuleMap::new_unchecked(dy.module.clone(), dx.module.clone(), m)
}

/// `sigma_M: M -> M**` together with both duals.
#[derive(Clone, Debug)]
pub struct EvalData<R: Ring> {
    pub dual: DualData<R>,
    pub double_dual: DualData<R>,
    pub sigma: ModuleMap<R>,
}

pub fn eval_map<R: Ring>(m: &FPModule<R>) -> EvalData<R> {
    let r = m.ring();
    let dual = dual_module(m);
    let double_dual = dual_module(&dual.module);
    // sigma(m_i) = (phi_k(m_i))_k
    let e = dual.pairing();
    let s = if m.n_gens() == 0 {
        r.zeros(0, double_dual.generators.rows())
    } else if double_dual.generators.rows() == 0 {
        r.zeros(m.n_gens(), 0)
    } else {
        r.solve(&double_dual.generators, &e).expect("evaluation lands in the double dual")
    };
    let sigma = ModuleMap::new_unchecked(m.clone(), double_dual.module.clone(), s);
    EvalData { dual, double_dual, sigma }
}

/// `coker(P_0* -> P_1*)` for the given presentation.
pub fn transpose_of_presentation<R: Ring>(m: &FPModule<R>) -> FPModule<R> {
    let r = m.ring();
    let rel = opposite_transfer(r, m.relations());
    FPModule::new(r.opposite(), m.side().flip(), m.relations().rows(), rel)
}

/// `coker(F_0* -> F_1*)` for the first map of a resolution.
pub fn transpose_from<R: Ring>(res: &Resolution<R>) -> FPModule<R> {
    let r = res.ring();
    let op = r.opposite();
    let idem: Vec<R::Elem> = res.term_idempotents(1).iter().map(|e| r.op_elem(e)).collect();
    let rel = opposite_transfer(r, &res.map(0)).vstack(&op.term_relations(&idem));
    FPModule::new(op, res.module.side().flip(), res.rank(1), rel)
}

/// The transpose, computed from the minimal projective presentation.
pub fn transpose<R: Ring>(m: &FPModule<R>) -> FPModule<R> {
    transpose_from(&resolution(m, 1))
}

/// `Ext^i(M, R)` as a subquotient of `F_i*` for a chosen resolution.
#[derive(Clone, Debug)]
pub struct ExtModule<R: Ring> {
    pub index: usize,
    /// Presented on the cycle generators.
    pub raw: FPModule<R>,
    /// Cycle generators (rows in `F_i*`).
    pub cycles: Matrix<R::Elem>,
    /// Boundary generators (rows in `F_i*`).
    pub boundaries: Matrix<R::Elem>,
}

impl<R: Ring> ExtModule<R> {
    pub fn value(&self) -> FPModule<R> {
        self.raw.minimized()
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }
}

/// `Ext^i` from a resolution with at least `i + 1` maps (or terminated).
pub fn ext_from<R: Ring>(res: &Resolution<R>, i: usize) -> ExtModule<R> {
    let r = res.ring();
    let op = r.opposite();
    let side = res.module.side().flip();
    let n = res.rank(i);
    let out_map = res.map(i).vstack(&res.term_relations(i));
    let cycles = if n == 0 {
        op.zeros(0, 0)
    } else if out_map.rows() == 0 {
        op.identity(n)
    } else {
        let k = op.kernel_gens(&opposite_transfer(r, &out_map));
        if k.cols() != n {
            op.zeros(0, n)
        } else {
            k
        }
    };
    let boundaries = if i == 0 || n == 0 { op.zeros(0, n) } else { opposite_transfer(r, &res.map(i - 1)) };
    let raw = subquotient(&op, side, &cycles, &boundaries).expect("boundaries are cycles");
    ExtModule { index: i, raw, cycles, boundaries }
}

pub fn ext<R: Ring>(m: &FPModule<R>, i: usize) -> ExtModule<R> {
    ext_from(&resolution(m, i + 1), i)
}

/// `Ext^0..=Ext^upto` from one resolution.
pub fn ext_range<R: Ring>(m: &FPModule<R>, upto: usize) -> Vec<ExtModule<R>> {
    let res = resolution(m, upto + 1);
    (0..=upto).map(|i| ext_from(&res, i)).collect()
}

/// Least `j <= cap` with `Ext^j(M, R) != 0`.
pub fn grade<R: Ring>(m: &FPModule<R>, cap: usize) -> Capped {
    let mut res = resolution(m, 1);
    for j in 0..=cap {
        res.extend_to(j + 1);
        if !ext_from(&res, j).is_zero() {
            return Capped::Value(j as i64);
        }
    }
    Capped::AtLeast(cap as i64 + 1)
}

/// Largest `t <= cap` with `Ext^i(transpose(M), R) = 0` for `1 <= i <= t`.
pub fn torsionfree_level<R: Ring>(m: &FPModule<R>, cap: usize) -> usize {
    let d = transpose(m);
    let mut res = resolution(&d, 1);
    (1..=cap)
        .take_while(|&i| {
            res.extend_to(i + 1);
            ext_from(&res, i).is_zero()
        })
        .count()
}

/// Least `d <= cap` with a projective `d`-th syzygy (`-1` for the zero module).
pub fn projective_dimension<R: Ring>(m: &FPModule<R>, cap: usize) -> Capped {
    if m.is_zero() {
        return Capped::Value(-1);
    }
    let mut res = resolution(m, 0);
    for d in 0..=cap {
        res.extend_to(d + 1);
        if res.syzygy(d).0.is_projective() {
            return Capped::Value(d as i64);
        }
    }
    Capped::AtLeast(cap as i64 + 1)
}

/// `0 -> Ext^1(D M) -> M -> M** -> Ext^2(D M) -> 0` with explicit maps.
#[derive(Clone, Debug)]
pub struct Lemma21<R: Ring> {
    pub ext1: FPModule<R>,
    pub module: FPModule<R>,
    pub double_dual: FPModule<R>,
    pub ext2: FPModule<R>,
    pub incl: ModuleMap<R>,
    pub sigma: ModuleMap<R>,
    pub proj: ModuleMap<R>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma21Checks {
    pub injective: bool,
    pub exact_at_module: bool,
    pub exact_at_double_dual: bool,
    pub surjective: bool,
    /// Invariants agree with Ext of the transpose computed independently.
    pub ext_agree: bool,
}

impl Lemma21Checks {
    pub fn all(&self) -> bool {
        self.injective && self.exact_at_module && self.exact_at_double_dual && self.surjective && self.ext_agree
    }
}

pub fn lemma21_sequence<R: Ring>(m: &FPModule<R>) -> Lemma21<R> {
    let r = m.ring();
    let min = m.minimal_presentation();
    let mm = &min.module;
    let ev = eval_map(mm);
    let e = ev.sigma.matrix();
    // Ext^1(D M) = ker sigma.
    let (ext1, incl_min) = kernel_module(&ev.sigma);
    let incl = incl_min.then(&min.from_min);
    let sigma = min.to_min.then(&ev.sigma);
    let mss = ev.double_dual.module.clone();
    let ext2 = FPModule::new(r.clone(), mss.side(), mss.n_gens(), mss.relations().vstack(e));
    let proj = ModuleMap::new_unchecked(mss.clone(), ext2.clone(), r.identity(mss.n_gens()));
    Lemma21 { ext1, module: m.clone(), double_dual: mss, ext2, incl, sigma, proj }
}

impl<R: Ring> Lemma21<R> {
    pub fn verify(&self) -> Lemma21Checks {
        let d = transpose(&self.module);
        let res = resolution(&d, 3);
        let ext_agree =
            ext_from(&res, 1).raw.invariant() == self.ext1.invariant() && ext_from(&res, 2).raw.invariant() == self.ext2.invariant();
        Lemma21Checks {
            injective: self.incl.is_well_defined() && self.incl.is_injective(),
            exact_at_module: self.sigma.is_well_defined() && is_exact_at(&self.incl, &self.sigma),
            exact_at_double_dual: self.proj.is_well_defined() && is_exact_at(&self.sigma, &self.proj),
            surjective: self.proj.is_surjective(),
            ext_agree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integers::{int_matrix, Integers};
    use crate::ring::Side;

    fn zmod(n: i64) -> FPModule<Integers> {
        FPModule::new(Integers, Side::Left, 1, int_matrix(1, &[&[n]]))
    }

    #[test]
    fn torsion_has_grade_one() {
        let m = zmod(2);
        assert_eq!(grade(&m, 3), Capped::Value(1));
        assert_eq!(projective_dimension(&m, 3), Capped::Value(1));
        assert_eq!(torsionfree_level(&m, 3), 0);
        assert_eq!(ext(&m, 1).raw.invariant().to_string(), "Z/2");
        assert!(dual_module(&m).module.is_zero());
        assert_eq!(transpose(&m).invariant().to_string(), "Z/2");
    }

    #[test]
    fn free_module_behaviour() {
        let f = FPModule::free(Integers, Side::Left, 2);
        assert_eq!(grade(&f, 3), Capped::Value(0));
        assert_eq!(torsionfree_level(&f, 4), 4);
        assert!(transpose(&f).is_zero());
        assert!(eval_map(&f).sigma.is_iso());
        assert!(ext(&f, 2).is_zero());
        assert_eq!(grade(&FPModule::zero(Integers, Side::Left), 3), Capped::AtLeast(4));
    }

    #[test]
    fn lemma_sequence_for_mixed_group() {
        let m = FPModule::new(Integers, Side::Left, 2, int_matrix(2, &[&[2, 0]]));
        let l = lemma21_sequence(&m);
        assert!(l.verify().all());
        assert_eq!(l.ext1.invariant().to_string(), "Z/2");
        assert_eq!(l.double_dual.invariant().to_string(), "Z");
        assert!(l.ext2.is_zero());
    }

    #[test]
    fn resolution_of_cyclic_group() {
        let r = resolution(&zmod(2), 4);
        assert_eq!(r.ranks(), vec![1, 1, 0]);
        assert!(r.minimal);
        assert!(r.is_exact());
    }
}
