//! Linear-algebra view of modules over a finite-dimensional algebra: a basis
//! of the underlying F_p-space and the action matrices of the algebra basis.

use crate::fdalgebra::{FdElem, FdRing};
use crate::fp::{left_nullspace, solve_left, Echelon};
use crate::module::{FPModule, ModuleMap};
use crate::ring::{Matrix, Ring, Side};

/// `M = R^g / W` with a chosen complement basis of `W` in `R^g`.
#[derive(Clone, Debug)]
pub struct FdModuleData {
    ring: FdRing,
    side: Side,
    n_gens: usize,
    span: Echelon,
    basis: Vec<usize>,
    /// `actions[c]` is the matrix of `b_c` in row convention: `b_c * u_i = row i`.
    actions: Vec<Vec<Vec<u64>>>,
}

impl FdModuleData {
    pub fn from_module(m: &FPModule<FdRing>) -> FdModuleData {
        let ring = m.ring().clone();
        let d = ring.dim();
        let g = m.n_gens();
        let span = if m.relations().rows() == 0 { Echelon::new(ring.field(), g * d) } else { ring.submodule_span(m.relations()) };
        let basis = span.free_columns();
        let mut data = FdModuleData { ring, side: m.side(), n_gens: g, span, basis, actions: Vec::new() };
        data.actions = (0..d)
            .map(|c| {
                let bc = data.ring.basis_elem(c);
                (0..data.basis.len()).map(|i| data.coords(&data.apply(&bc, &data.basis_vector(i)))).collect()
            })
            .collect();
        data
    }

    /// Module with prescribed action matrices (all of size `dim x dim`) and
    /// generators given by the basis.
    fn from_actions(ring: FdRing, side: Side, actions: Vec<Vec<Vec<u64>>>) -> FPModule<FdRing> {
        let d = ring.dim();
        let n = actions.first().map_or(0, |a| a.len());
        let mut rows = Vec::with_capacity(d * n);
        for (c, a) in actions.iter().enumerate() {
            for (i, row) in a.iter().enumerate() {
                let mut r: Vec<FdElem> = row.iter().map(|&s| ring.neg(&scalar(&ring, s))).collect();
                r[i] = ring.add(&r[i], &ring.basis_elem(c));
                if !r.iter().all(|x| ring.is_zero(x)) {
                    rows.push(r);
                }
            }
        }
        let rel = ring.reduce_generators(&Matrix::from_rows(n, rows));
        FPModule::new(ring, side, n, rel)
    }

    pub fn ring(&self) -> &FdRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn action(&self, c: usize) -> &[Vec<u64>] {
        &self.actions[c]
    }

    fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.n_gens * self.ring.dim()];
        v[self.basis[i]] = 1;
        v
    }

    /// `a * v` for a flattened vector of `R^g`.
    fn apply(&self, a: &FdElem, v: &[u64]) -> Vec<u64> {
        let d = self.ring.dim();
        v.chunks(d).flat_map(|x| self.ring.mul(a, &x.to_vec())).collect()
    }

    /// Coordinates of a flattened vector of `R^g` in the module basis.
    pub fn coords(&self, v: &[u64]) -> Vec<u64> {
        let r = self.span.reduce(v);
        self.basis.iter().map(|&b| r[b]).collect()
    }

    /// Coordinates of a row vector over the generators.
    pub fn coords_of_row(&self, row: &[FdElem]) -> Vec<u64> {
        self.coords(&self.ring.flatten_vec(row))
    }

    pub fn gen_coords(&self, j: usize) -> Vec<u64> {
        let mut row = vec![self.ring.zero(); self.n_gens];
        row[j] = self.ring.one();
        self.coords_of_row(&row)
    }

    /// `dim soc M`: common kernel of the radical actions.
    pub fn socle_dim(&self) -> usize {
        let n = self.dim();
        if n == 0 {
            return 0;
        }
        let rad = self.ring.radical_indices();
        if rad.is_empty() {
            return n;
        }
        let wide: Vec<Vec<u64>> =
            (0..n).map(|i| rad.iter().flat_map(|&r| self.actions[r][i].iter().copied()).collect()).collect();
        left_nullspace(self.ring.field(), &wide, rad.len() * n).len()
    }

    /// `dim rad M`.
    pub fn radical_dim(&self) -> usize {
        let mut e = Echelon::new(self.ring.field(), self.dim());
        for &r in self.ring.radical_indices() {
            for row in &self.actions[r] {
                e.insert(row);
            }
        }
        e.rank()
    }

    /// F_p-matrix of a module map `f: X -> Y` in the data bases.
    pub fn linear_matrix(f: &ModuleMap<FdRing>, x: &FdModuleData, y: &FdModuleData) -> Vec<Vec<u64>> {
        let d = x.ring.dim();
        (0..x.dim())
            .map(|i| {
                let (j, k) = (x.basis[i] / d, x.basis[i] % d);
                let bk = x.ring.basis_elem(k);
                let img: Vec<FdElem> = f.matrix().row(j).iter().map(|e| x.ring.mul(&bk, e)).collect();
                y.coords_of_row(&img)
            })
            .collect()
    }

    /// For a module whose generators are F_p-independent and span it: the
    /// matrix converting data coordinates into generator coordinates.
    pub fn generator_basis_change(&self) -> Vec<Vec<u64>> {
        let n = self.dim();
        assert_eq!(n, self.n_gens, "generators are not a basis");
        let t: Vec<Vec<u64>> = (0..n).map(|j| self.gen_coords(j)).collect();
        (0..n)
            .map(|k| {
                let mut e = vec![0; n];
                e[k] = 1;
                solve_left(self.ring.field(), &t, n, &e).expect("generators form a basis")
            })
            .collect()
    }

    /// Presentation on the data basis (unminimized).
    pub fn to_module(&self) -> FPModule<FdRing> {
        FdModuleData::from_actions(self.ring.clone(), self.side, self.actions.clone())
    }

    /// Module map `src -> tgt` from a linear matrix `l: data(src) -> data(tgt)`
    /// where `tgt` is presented on its data basis.
    pub fn module_map_from_linear(src: &FPModule<FdRing>, src_data: &FdModuleData, tgt: &FPModule<FdRing>, l: &[Vec<u64>]) -> ModuleMap<FdRing> {
        let ring = src.ring();
        let field = ring.field();
        let cols = tgt.n_gens();
        let rows = (0..src.n_gens())
            .map(|j| {
                let img = field.vec_mat(&src_data.gen_coords(j), l, cols);
                img.iter().map(|&s| scalar(ring, s)).collect()
            })
            .collect();
        ModuleMap::new_unchecked(src.clone(), tgt.clone(), Matrix::from_rows(cols, rows))
    }
}

fn scalar(ring: &FdRing, s: u64) -> FdElem {
    ring.from_int(s as i64)
}

fn transpose(m: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// The vector-space dual `Hom_{F_p}(M, F_p)` on the opposite side.
pub fn vdual(m: &FPModule<FdRing>) -> FPModule<FdRing> {
    let data = FdModuleData::from_module(m);
    vdual_of_data(&data).minimized()
}

fn vdual_of_data(data: &FdModuleData) -> FPModule<FdRing> {
    let n = data.dim();
    let actions = data.actions.iter().map(|a| transpose(a, n)).collect();
    FdModuleData::from_actions(data.ring.opposite(), data.side.flip(), actions)
}

/// Injective envelope `M -> I` with its essentiality check.
#[derive(Clone, Debug)]
pub struct InjectiveEnvelope {
    pub module: FPModule<FdRing>,
    pub mono: ModuleMap<FdRing>,
    pub essential: bool,
}

/// `M -> D(P(D M))`, the dual of a projective cover of the dual.
pub fn injective_envelope(m: &FPModule<FdRing>) -> InjectiveEnvelope {
    let ring = m.ring();
    let md = FdModuleData::from_module(m);
    let dm = vdual_of_data(&md);
    let dm_data = FdModuleData::from_module(&dm);
    let cover = dm.ring().projective_cover(dm.n_gens(), dm.relations());
    let q = FPModule::new(dm.ring().clone(), dm.side(), cover.n_gens, cover.relations);
    let pi = ModuleMap::new_unchecked(q.clone(), dm.clone(), cover.epi);
    let q_data = FdModuleData::from_module(&q);
    // Generators of DM form the dual basis of M's; D(pi) in those coordinates is pi^T.
    let pi_lin = FdModuleData::linear_matrix(&pi, &q_data, &dm_data);
    let to_eps = dm_data.generator_basis_change();
    let pi_lin = ring.field().mat_mul(&pi_lin, &to_eps, md.dim());
    let dq = vdual_of_data(&q_data);
    let mono_lin = transpose(&pi_lin, md.dim());
    let mono_raw = FdModuleData::module_map_from_linear(m, &md, &dq, &mono_lin);
    let min = dq.minimal_presentation();
    let mono = mono_raw.then(&min.to_min);
    let rank = Echelon::from_rows(ring.field(), q_data.dim(), &mono_lin).rank();
    let i_data = FdModuleData::from_module(&min.module);
    let essential = rank == md.dim() && i_data.socle_dim() == md.socle_dim();
    InjectiveEnvelope { module: min.module, mono, essential }
}

/// Whether `M` is injective (its dual is projective).
pub fn is_injective_module(m: &FPModule<FdRing>) -> bool {
    let d = vdual(m);
    d.is_projective()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdalgebra::{ArrowSpec, QuiverSpec};

    fn a2() -> FdRing {
        FdRing::from_quiver(&QuiverSpec {
            p: 2,
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![ArrowSpec { name: "a".into(), from: "1".into(), to: "2".into() }],
            relations: vec![],
            nilpotency_bound: None,
        })
        .unwrap()
    }

    fn dual_numbers() -> FdRing {
        FdRing::from_quiver(&QuiverSpec {
            p: 2,
            vertices: vec!["1".into()],
            arrows: vec![ArrowSpec { name: "x".into(), from: "1".into(), to: "1".into() }],
            relations: vec!["x*x".into()],
            nilpotency_bound: None,
        })
        .unwrap()
    }

    /// `R e / (rows)` as a cyclic left module.
    fn cyclic(r: &FdRing, rel: &[&str]) -> FPModule<FdRing> {
        let rows = rel.iter().map(|s| vec![r.parse_elem(s).unwrap()]).collect();
        FPModule::new(r.clone(), Side::Left, 1, Matrix::from_rows(1, rows))
    }

    #[test]
    fn projective_and_simple_dimensions() {
        let r = a2();
        let p1 = cyclic(&r, &["e2"]);
        let data = FdModuleData::from_module(&p1);
        assert_eq!(data.dim(), 2);
        assert_eq!(data.socle_dim(), 1);
        assert!(p1.is_projective());
        let s1 = cyclic(&r, &["e2", "a"]);
        assert_eq!(FdModuleData::from_module(&s1).dim(), 1);
        assert!(!s1.is_projective());
    }

    #[test]
    fn vdual_is_involutive_on_dimensions() {
        let r = a2();
        let p1 = cyclic(&r, &["e2"]);
        let d = vdual(&p1);
        assert_eq!(d.side(), Side::Right);
        assert_eq!(d.invariant().dimension(), Some(2));
        let dd = vdual(&d);
        assert_eq!(dd.ring(), &r);
        assert_eq!(dd.invariant(), p1.invariant());
    }

    #[test]
    fn envelope_of_simple_socle() {
        // Over A_2, S_2 = soc(P_1) embeds in the injective P_1 = I_2.
        let r = a2();
        let s2 = cyclic(&r, &["e1"]);
        let env = injective_envelope(&s2);
        assert!(env.essential);
        assert!(env.mono.is_well_defined());
        assert!(env.mono.is_injective());
        assert_eq!(env.module.invariant().dimension(), Some(2));
        assert!(is_injective_module(&env.module));
        // S_1 is injective.
        let s1 = cyclic(&r, &["e2", "a"]);
        assert!(is_injective_module(&s1));
        assert_eq!(injective_envelope(&s1).module.invariant().dimension(), Some(1));
    }

    #[test]
    fn self_injective_regular_module() {
        let r = dual_numbers();
        let reg = FPModule::free(r.clone(), Side::Left, 1);
        assert!(is_injective_module(&reg));
        let s = cyclic(&r, &["x"]);
        let env = injective_envelope(&s);
        assert!(env.essential);
        assert_eq!(env.module.invariant().dimension(), Some(2));
    }
}
