//! Finitely presented modules, maps between them, and the finite limits and
//! colimits built from kernels of matrices.

use crate::error::{HalgError, Result};
use crate::ring::{Matrix, ModuleInvariant, Ring, Side};

/// `R^n / rowspan(relations)` over the acting ring `ring` (the opposite of the
/// base ring when `side` is `Right`).
#[derive(Clone, Debug, PartialEq)]
pub struct FPModule<R: Ring> {
    ring: R,
    side: Side,
    n_gens: usize,
    relations: Matrix<R::Elem>,
}

impl<R: Ring> FPModule<R> {
    pub fn new(ring: R, side: Side, n_gens: usize, relations: Matrix<R::Elem>) -> Self {
        assert_eq!(relations.cols(), n_gens, "relation width must equal the number of generators");
        FPModule { ring, side, n_gens, relations }
    }

    pub fn free(ring: R, side: Side, n: usize) -> Self {
        let rel = ring.zeros(0, n);
        FPModule::new(ring, side, n, rel)
    }

    pub fn zero(ring: R, side: Side) -> Self {
        FPModule::free(ring, side, 0)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn relations(&self) -> &Matrix<R::Elem> {
        &self.relations
    }

    pub fn same_category(&self, other: &Self) -> bool {
        self.ring == other.ring && self.side == other.side
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_category(other) {
            Ok(())
        } else {
            Err(HalgError::MixedRings)
        }
    }

    pub fn invariant(&self) -> ModuleInvariant {
        self.ring.invariant(self.n_gens, &self.relations)
    }

    pub fn is_zero(&self) -> bool {
        self.invariant().is_zero()
    }

    pub fn is_projective(&self) -> bool {
        self.ring.is_projective(self.n_gens, &self.relations)
    }

    /// Whether `v` (a row over the generators) is zero in the module.
    pub fn is_zero_vector(&self, v: &[R::Elem]) -> bool {
        let m = Matrix::from_rows(self.n_gens, vec![v.to_vec()]);
        self.rows_vanish(&m)
    }

    /// Whether every row of `m` lies in the relation span.
    pub fn rows_vanish(&self, m: &Matrix<R::Elem>) -> bool {
        if self.ring.mat_is_zero(m) {
            return true;
        }
        self.ring.solve(&self.relations, m).is_some()
    }

    pub fn identity(&self) -> ModuleMap<R> {
        ModuleMap::new_unchecked(self.clone(), self.clone(), self.ring.identity(self.n_gens))
    }

    pub fn minimal_presentation(&self) -> MinimalPresentation<R> {
        let mf = self.ring.minimal_presentation(self.n_gens, &self.relations);
        let module = FPModule::new(self.ring.clone(), self.side, mf.n_gens, mf.relations);
        MinimalPresentation {
            to_min: ModuleMap::new_unchecked(self.clone(), module.clone(), mf.to_min),
            from_min: ModuleMap::new_unchecked(module.clone(), self.clone(), mf.from_min),
            module,
        }
    }

    pub fn minimized(&self) -> FPModule<R> {
        self.minimal_presentation().module
    }

    /// Submodule generated by the rows of `gens` (vectors over this module's
    /// generators), with its inclusion.
    pub fn submodule(&self, gens: &Matrix<R::Elem>) -> (FPModule<R>, ModuleMap<R>) {
        let sub = quotient_of_span(&self.ring, self.side, gens, &self.relations);
        let incl = ModuleMap::new_unchecked(sub.clone(), self.clone(), gens.clone());
        (sub, incl)
    }

    /// Element-wise formatted relation rows.
    pub fn format_relations(&self) -> Vec<Vec<String>> {
        self.relations.row_iter().map(|r| r.iter().map(|x| self.ring.format_elem(x)).collect()).collect()
    }
}

impl<R: Ring> std::fmt::Display for FPModule<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} module with {} generators and {} relations", self.side.as_str(), self.n_gens, self.relations.rows())
    }
}

/// A module with mutually inverse isomorphisms to and from its minimal form.
#[derive(Clone, Debug)]
pub struct MinimalPresentation<R: Ring> {
    pub module: FPModule<R>,
    pub to_min: ModuleMap<R>,
    pub from_min: ModuleMap<R>,
}

/// Module generated by the rows of `gens` inside `R^n / rowspan(rel)`: the
/// relations are the `x` with `x * gens` in `rowspan(rel)`.
pub fn quotient_of_span<R: Ring>(ring: &R, side: Side, gens: &Matrix<R::Elem>, rel: &Matrix<R::Elem>) -> FPModule<R> {
    let k = gens.rows();
    if k == 0 {
        return FPModule::zero(ring.clone(), side);
    }
    let stacked = gens.vstack(rel);
    let kernel = ring.kernel_gens(&stacked);
    let relations = if kernel.rows() == 0 { ring.zeros(0, k) } else { ring.reduce_generators(&kernel.col_range(0, k)) };
    FPModule::new(ring.clone(), side, k, relations)
}

/// `span(K) / span(I)` inside a free module, for `I` contained in `span(K)`.
pub fn subquotient<R: Ring>(ring: &R, side: Side, k: &Matrix<R::Elem>, i: &Matrix<R::Elem>) -> Result<FPModule<R>> {
    if i.rows() > 0 && !ring.mat_is_zero(i) && (k.rows() == 0 || ring.solve(k, i).is_none()) {
        return Err(HalgError::NotContained);
    }
    Ok(quotient_of_span(ring, side, k, i))
}

/// A homomorphism given on generators: row `j` is the image of generator `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap<R: Ring> {
    source: FPModule<R>,
    target: FPModule<R>,
    matrix: Matrix<R::Elem>,
}

impl<R: Ring> ModuleMap<R> {
    /// Checked constructor: every source relation must map into the target relations.
    pub fn new(source: FPModule<R>, target: FPModule<R>, matrix: Matrix<R::Elem>) -> Result<Self> {
        source.check_same(&target)?;
        let f = ModuleMap::new_unchecked(source, target, matrix);
        if f.is_well_defined() {
            Ok(f)
        } else {
            Err(HalgError::NotWellDefined("a source relation does not map to zero".into()))
        }
    }

    pub fn new_unchecked(source: FPModule<R>, target: FPModule<R>, matrix: Matrix<R::Elem>) -> Self {
        assert_eq!(matrix.rows(), source.n_gens(), "map rows must match source generators");
        assert_eq!(matrix.cols(), target.n_gens(), "map columns must match target generators");
        ModuleMap { source, target, matrix }
    }

    pub fn zero(source: FPModule<R>, target: FPModule<R>) -> Self {
        let m = source.ring().zeros(source.n_gens(), target.n_gens());
        ModuleMap::new_unchecked(source, target, m)
    }

    pub fn source(&self) -> &FPModule<R> {
        &self.source
    }

    pub fn target(&self) -> &FPModule<R> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<R::Elem> {
        &self.matrix
    }

    pub fn ring(&self) -> &R {
        self.source.ring()
    }

    pub fn is_well_defined(&self) -> bool {
        let img = self.ring().mat_mul(self.source.relations(), &self.matrix);
        self.target.rows_vanish(&img)
    }

    /// `other ∘ self` (first `self`, then `other`).
    pub fn then(&self, other: &ModuleMap<R>) -> ModuleMap<R> {
        assert_eq!(self.target.n_gens(), other.source.n_gens(), "composition through modules of different size");
        let m = self.ring().mat_mul(&self.matrix, &other.matrix);
        ModuleMap::new_unchecked(self.source.clone(), other.target.clone(), m)
    }

    pub fn add(&self, other: &ModuleMap<R>) -> ModuleMap<R> {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.ring().mat_add(&self.matrix, &other.matrix))
    }

    pub fn neg(&self) -> ModuleMap<R> {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.ring().mat_neg(&self.matrix))
    }

    pub fn is_zero(&self) -> bool {
        self.target.rows_vanish(&self.matrix)
    }

    /// Equality as homomorphisms (matrices agree modulo target relations).
    pub fn equals(&self, other: &ModuleMap<R>) -> bool {
        self.target.rows_vanish(&self.ring().mat_sub(&self.matrix, &other.matrix))
    }

    pub fn is_injective(&self) -> bool {
        kernel_module(self).0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        cokernel(self).0.is_zero()
    }

    pub fn is_iso(&self) -> bool {
        self.inverse().is_some()
    }

    /// Two-sided inverse, verified.
    pub fn inverse(&self) -> Option<ModuleMap<R>> {
        let r = self.ring();
        let t = self.target.n_gens();
        let stacked = self.matrix.vstack(self.target.relations());
        let x = r.solve(&stacked, &r.identity(t))?;
        let g = ModuleMap::new_unchecked(self.target.clone(), self.source.clone(), x.col_range(0, self.source.n_gens()));
        let ok = g.is_well_defined() && self.then(&g).equals(&self.source.identity()) && g.then(self).equals(&self.target.identity());
        ok.then_some(g)
    }
}

/// Kernel of `f` with its inclusion into the source.
pub fn kernel_module<R: Ring>(f: &ModuleMap<R>) -> (FPModule<R>, ModuleMap<R>) {
    let r = f.ring();
    let gm = f.source().n_gens();
    let stacked = f.matrix().vstack(f.target().relations());
    let gens = if stacked.rows() == 0 {
        r.zeros(0, 0)
    } else {
        let k = r.kernel_gens(&stacked);
        if k.rows() == 0 {
            r.zeros(0, gm)
        } else {
            r.reduce_generators(&k.col_range(0, gm))
        }
    };
    let gens = if gens.cols() != gm { r.zeros(0, gm) } else { gens };
    let (sub, incl) = f.source().submodule(&gens);
    let min = sub.minimal_presentation();
    if min.module.n_gens() == sub.n_gens() {
        return (sub, incl);
    }
    let incl = min.from_min.then(&incl);
    (min.module, incl)
}

/// Cokernel of `f` with its projection from the target.
pub fn cokernel<R: Ring>(f: &ModuleMap<R>) -> (FPModule<R>, ModuleMap<R>) {
    let t = f.target();
    let rel = t.relations().vstack(f.matrix());
    let c = FPModule::new(t.ring().clone(), t.side(), t.n_gens(), rel);
    let proj = ModuleMap::new_unchecked(t.clone(), c.clone(), t.ring().identity(t.n_gens()));
    (c, proj)
}

/// Image of `f`: the corestriction `source -> im` and the inclusion `im -> target`.
pub fn image<R: Ring>(f: &ModuleMap<R>) -> (FPModule<R>, ModuleMap<R>, ModuleMap<R>) {
    let (im, incl) = f.target().submodule(f.matrix());
    let r = f.ring();
    let epi = ModuleMap::new_unchecked(f.source().clone(), im.clone(), r.identity(f.source().n_gens()));
    (im, epi, incl)
}

/// `M ⊕ N` with its inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum<R: Ring> {
    pub module: FPModule<R>,
    pub in1: ModuleMap<R>,
    pub in2: ModuleMap<R>,
    pub pr1: ModuleMap<R>,
    pub pr2: ModuleMap<R>,
}

pub fn direct_sum<R: Ring>(m: &FPModule<R>, n: &FPModule<R>) -> Result<DirectSum<R>> {
    m.check_same(n)?;
    let r = m.ring();
    let (a, b) = (m.n_gens(), n.n_gens());
    let module = FPModule::new(r.clone(), m.side(), a + b, r.block_diag(m.relations(), n.relations()));
    let in1 = r.identity(a).hstack(&r.zeros(a, b));
    let in2 = r.zeros(b, a).hstack(&r.identity(b));
    Ok(DirectSum {
        in1: ModuleMap::new_unchecked(m.clone(), module.clone(), in1.clone()),
        in2: ModuleMap::new_unchecked(n.clone(), module.clone(), in2.clone()),
        pr1: ModuleMap::new_unchecked(module.clone(), m.clone(), in1.transpose()),
        pr2: ModuleMap::new_unchecked(module.clone(), n.clone(), in2.transpose()),
        module,
    })
}

/// `f ⊕ g : A ⊕ C -> B ⊕ D`.
pub fn direct_sum_map<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> Result<ModuleMap<R>> {
    let s = direct_sum(f.source(), g.source())?.module;
    let t = direct_sum(f.target(), g.target())?.module;
    Ok(ModuleMap::new_unchecked(s, t, f.ring().block_diag(f.matrix(), g.matrix())))
}

/// The map `X -> Y ⊕ Z` with components `f`, `g`.
pub fn pair_into<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> Result<ModuleMap<R>> {
    let t = direct_sum(f.target(), g.target())?.module;
    Ok(ModuleMap::new_unchecked(f.source().clone(), t, f.matrix().hstack(g.matrix())))
}

/// The map `X ⊕ Y -> Z` restricting to `f` and `g`.
pub fn copair<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> Result<ModuleMap<R>> {
    let s = direct_sum(f.source(), g.source())?.module;
    Ok(ModuleMap::new_unchecked(s, f.target().clone(), f.matrix().vstack(g.matrix())))
}

#[derive(Clone, Debug)]
pub struct Pullback<R: Ring> {
    pub module: FPModule<R>,
    pub px: ModuleMap<R>,
    pub py: ModuleMap<R>,
}

/// Pullback of `f: X -> Z` and `g: Y -> Z`.
pub fn pullback<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> Result<Pullback<R>> {
    f.target().check_same(g.target())?;
    let diff = copair(f, &g.neg())?;
    let (w, incl) = kernel_module(&diff);
    let gx = f.source().n_gens();
    let gy = g.source().n_gens();
    let m = incl.matrix();
    Ok(Pullback {
        px: ModuleMap::new_unchecked(w.clone(), f.source().clone(), m.col_range(0, gx)),
        py: ModuleMap::new_unchecked(w.clone(), g.source().clone(), m.col_range(gx, gx + gy)),
        module: w,
    })
}

#[derive(Clone, Debug)]
pub struct Pushout<R: Ring> {
    pub module: FPModule<R>,
    pub ix: ModuleMap<R>,
    pub iy: ModuleMap<R>,
}

/// Pushout of `f: Z -> X` and `g: Z -> Y`.
pub fn pushout<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> Result<Pushout<R>> {
    f.source().check_same(g.source())?;
    let diff = pair_into(f, &g.neg())?;
    let (w, proj) = cokernel(&diff);
    let sum = direct_sum(f.target(), g.target())?;
    Ok(Pushout {
        ix: ModuleMap::new_unchecked(f.target().clone(), w.clone(), f.ring().mat_mul(sum.in1.matrix(), proj.matrix())),
        iy: ModuleMap::new_unchecked(g.target().clone(), w.clone(), f.ring().mat_mul(sum.in2.matrix(), proj.matrix())),
        module: w,
    })
}

/// Whether `A -f-> B -g-> C` is exact at `B`.
pub fn is_exact_at<R: Ring>(f: &ModuleMap<R>, g: &ModuleMap<R>) -> bool {
    if !f.then(g).is_zero() {
        return false;
    }
    let (_, incl) = kernel_module(g);
    if incl.matrix().rows() == 0 {
        return true;
    }
    let stacked = f.matrix().vstack(f.target().relations());
    f.ring().solve(&stacked, incl.matrix()).is_some()
}

/// Attestations for `0 -> A -> B -> C -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesChecks {
    pub composite_zero: bool,
    pub injective: bool,
    pub surjective: bool,
    pub exact_middle: bool,
}

impl SesChecks {
    pub fn all(&self) -> bool {
        self.composite_zero && self.injective && self.surjective && self.exact_middle
    }
}

#[derive(Clone, Debug)]
pub struct ShortExactSequence<R: Ring> {
    pub f: ModuleMap<R>,
    pub g: ModuleMap<R>,
}

impl<R: Ring> ShortExactSequence<R> {
    pub fn new(f: ModuleMap<R>, g: ModuleMap<R>) -> Self {
        ShortExactSequence { f, g }
    }

    pub fn verify(&self) -> SesChecks {
        SesChecks {
            composite_zero: self.f.then(&self.g).is_zero(),
            injective: self.f.is_injective(),
            surjective: self.g.is_surjective(),
            exact_middle: is_exact_at(&self.f, &self.g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integers::{int_matrix, Integers};

    fn zmod(n: i64) -> FPModule<Integers> {
        FPModule::new(Integers, Side::Left, 1, int_matrix(1, &[&[n]]))
    }

    fn z() -> FPModule<Integers> {
        FPModule::free(Integers, Side::Left, 1)
    }

    #[test]
    fn kernel_of_canonical_surjection() {
        let f = ModuleMap::new(z(), zmod(4), int_matrix(1, &[&[1]])).unwrap();
        let (k, incl) = kernel_module(&f);
        assert_eq!(k.invariant().to_string(), "Z");
        assert!(incl.is_injective());
        assert!(is_exact_at(&incl, &f));
    }

    #[test]
    fn cokernel_of_doubling() {
        let f = ModuleMap::new(z(), z(), int_matrix(1, &[&[2]])).unwrap();
        assert_eq!(cokernel(&f).0.invariant().to_string(), "Z/2");
        assert!(!ModuleMap::new(zmod(2), z(), int_matrix(1, &[&[1]])).is_ok());
    }

    #[test]
    fn pullback_of_parity_maps() {
        let f = ModuleMap::new(z(), zmod(2), int_matrix(1, &[&[1]])).unwrap();
        let pb = pullback(&f, &f).unwrap();
        assert_eq!(pb.module.invariant().to_string(), "Z^2");
        assert!(pb.px.then(&f).equals(&pb.py.then(&f)));
    }

    #[test]
    fn pushout_along_zero() {
        let f = ModuleMap::new(z(), z(), int_matrix(1, &[&[2]])).unwrap();
        let g = ModuleMap::zero(z(), FPModule::zero(Integers, Side::Left));
        let po = pushout(&f, &g).unwrap();
        assert_eq!(po.module.invariant().to_string(), "Z/2");
    }

    #[test]
    fn subquotient_examples() {
        let z2 = subquotient(&Integers, Side::Left, &int_matrix(1, &[&[1]]), &int_matrix(1, &[&[2]])).unwrap();
        assert_eq!(z2.invariant().to_string(), "Z/2");
        let m = subquotient(&Integers, Side::Left, &int_matrix(2, &[&[2, 0], &[0, 3]]), &int_matrix(2, &[&[2, 0]])).unwrap();
        assert_eq!(m.invariant().to_string(), "Z");
        let err = subquotient(&Integers, Side::Left, &int_matrix(1, &[&[2]]), &int_matrix(1, &[&[1]]));
        assert!(matches!(err, Err(HalgError::NotContained)));
        let same = subquotient(&Integers, Side::Left, &int_matrix(2, &[&[1, 1]]), &int_matrix(2, &[&[1, 1]])).unwrap();
        assert!(same.is_zero());
    }

    #[test]
    fn inverse_of_automorphism() {
        let m = FPModule::free(Integers, Side::Left, 2);
        let f = ModuleMap::new(m.clone(), m.clone(), int_matrix(2, &[&[1, 1], &[0, 1]])).unwrap();
        let g = f.inverse().unwrap();
        assert!(f.then(&g).equals(&m.identity()));
        let d = ModuleMap::new(z(), z(), int_matrix(1, &[&[2]])).unwrap();
        assert!(d.inverse().is_none());
    }

    #[test]
    fn mixed_sides_are_rejected() {
        let l = z();
        let r = FPModule::free(Integers, Side::Right, 1);
        assert!(matches!(direct_sum(&l, &r), Err(HalgError::MixedRings)));
    }
}
