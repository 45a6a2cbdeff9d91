//! The ring-backend contract and the dense matrix layer.
//!
//! Every module in this crate is a *left* module over its acting ring and is
//! stored as a row space: a map between free modules `R^m -> R^n` is an
//! `m x n` matrix `A` acting by `x |-> x * A`. A right module over `L` is a
//! left module over the opposite ring `L^op`; [`Ring::opposite`] produces that
//! acting ring and [`opposite_transfer`] dualizes a free map.

use std::fmt::Debug;

/// Which side of the base ring a module lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// Backend kind, used for dispatch and serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    Integers,
    BoundQuiver,
}

/// A dense row-major matrix. Matrices with zero rows or zero columns are
/// valid and represent maps from or to the zero module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<E> {
        self.row(i).to_vec()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[E]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Matrix<T>
    where
        F: FnMut(&E) -> T,
    {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn row_range(&self, start: usize, end: usize) -> Self {
        let idx: Vec<usize> = (start..end).collect();
        self.select_rows(&idx)
    }

    pub fn col_range(&self, start: usize, end: usize) -> Self {
        let cols = end - start;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i)[start..end].iter().cloned());
        }
        Matrix { rows: self.rows, cols, data }
    }
}

/// The computable-ring contract.
///
/// Elements of the opposite ring share the representation of the ring's own
/// elements; [`Ring::op_elem`] is the element bijection `R -> R^op`.
pub trait Ring: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Debug;
    /// Commutative ring over which Hom groups are computed
    /// (the integers themselves, or the prime field of an algebra).
    type Base: Ring;

    fn kind(&self) -> BackendKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn opposite(&self) -> Self;
    /// Element map into the opposite ring.
    fn op_elem(&self, a: &Self::Elem) -> Self::Elem;

    /// Rows generating `{x : x * a = 0}` as a left module.
    fn kernel_gens(&self, a: &Matrix<Self::Elem>) -> Matrix<Self::Elem>;
    /// One `X` with `X * a = b`, if any.
    fn solve(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Option<Matrix<Self::Elem>>;
    /// A smaller generating set for the left submodule spanned by the rows.
    fn reduce_generators(&self, rows: &Matrix<Self::Elem>) -> Matrix<Self::Elem>;

    /// Presentation reduced to the backend's minimal form.
    fn minimal_presentation(&self, n_gens: usize, rel: &Matrix<Self::Elem>) -> MinimalForm<Self::Elem>;
    fn invariant(&self, n_gens: usize, rel: &Matrix<Self::Elem>) -> ModuleInvariant;
    fn is_projective(&self, n_gens: usize, rel: &Matrix<Self::Elem>) -> bool;
    /// A projective module surjecting onto the presented one, minimal where
    /// the backend can decide it.
    fn projective_cover(&self, n_gens: usize, rel: &Matrix<Self::Elem>) -> CoverData<Self::Elem>;
    /// Whether every entry lies in the Jacobson radical (fd) / is a non-unit (integers).
    fn in_radical(&self, a: &Self::Elem) -> bool;

    fn base(&self) -> Self::Base;
    fn base_dim(&self) -> usize;
    fn to_base(&self, a: &Self::Elem) -> Vec<<Self::Base as Ring>::Elem>;
    fn from_base(&self, coords: &[<Self::Base as Ring>::Elem]) -> Self::Elem;
    /// `base_dim x base_dim` matrix of `e |-> a * e` on coordinates (row convention).
    fn left_mul_matrix(&self, a: &Self::Elem) -> Matrix<<Self::Base as Ring>::Elem>;
    /// `base_dim x base_dim` matrix of `e |-> e * a` on coordinates (row convention).
    fn right_mul_matrix(&self, a: &Self::Elem) -> Matrix<<Self::Base as Ring>::Elem>;

    fn format_elem(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, crate::HalgError>;

    /// Whether minimal injective resolutions are computable.
    fn has_injectives(&self) -> bool;

    /// Primitive orthogonal idempotents summing to one.
    fn vertex_idempotents(&self) -> Vec<Self::Elem>;

    // Projective terms `⊕ R e_j`, one idempotent per generator; a vector `x`
    // is canonical when `x_j = x_j e_j`.

    /// Relations `(1 - e_j) ε_j` of `⊕ R e_j`.
    fn term_relations(&self, idem: &[Self::Elem]) -> Matrix<Self::Elem> {
        let n = idem.len();
        let one = self.one();
        let rows = idem
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != one)
            .map(|(j, e)| {
                let mut r = vec![self.zero(); n];
                r[j] = self.sub(&one, e);
                r
            })
            .collect();
        Matrix::from_rows(n, rows)
    }

    /// `diag(e_j)`, the identity of `⊕ R e_j`.
    fn term_identity(&self, idem: &[Self::Elem]) -> Matrix<Self::Elem> {
        let mut m = self.zeros(idem.len(), idem.len());
        for (j, e) in idem.iter().enumerate() {
            m.set(j, j, e.clone());
        }
        m
    }

    /// Entries `e_k x_kj e'_j` for left idempotents `e_k` (if given) and right idempotents `e'_j`.
    fn canonical(&self, rows: &Matrix<Self::Elem>, left: Option<&[Self::Elem]>, right: &[Self::Elem]) -> Matrix<Self::Elem> {
        let one = self.one();
        let mut out = rows.clone();
        for i in 0..rows.rows() {
            for j in 0..rows.cols() {
                let mut x = rows.get(i, j).clone();
                if self.is_zero(&x) {
                    continue;
                }
                if let Some(l) = left {
                    if l[i] != one {
                        x = self.mul(&l[i], &x);
                    }
                }
                if right[j] != one {
                    x = self.mul(&x, &right[j]);
                }
                out.set(i, j, x);
            }
        }
        out
    }

    /// An idempotent `e` with `e x = x` for every entry of the row.
    fn row_idempotent(&self, row: &[Self::Elem]) -> Self::Elem {
        let idem = self.vertex_idempotents();
        if idem.len() > 1 {
            for e in idem {
                if row.iter().all(|x| self.mul(&e, x) == *x) {
                    return e;
                }
            }
        }
        self.one()
    }

    // Matrix helpers.

    fn zeros(&self, rows: usize, cols: usize) -> Matrix<Self::Elem> {
        Matrix::filled(rows, cols, self.zero())
    }

    fn identity(&self, n: usize) -> Matrix<Self::Elem> {
        let mut m = self.zeros(n, n);
        for i in 0..n {
            m.set(i, i, self.one());
        }
        m
    }

    fn mat_mul(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        assert_eq!(a.cols(), b.rows(), "matrix product dimension mismatch");
        let mut out = self.zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let x = a.get(i, k);
                if self.is_zero(x) {
                    continue;
                }
                for j in 0..b.cols() {
                    let y = b.get(k, j);
                    if self.is_zero(y) {
                        continue;
                    }
                    let acc = self.add(out.get(i, j), &self.mul(x, y));
                    out.set(i, j, acc);
                }
            }
        }
        out
    }

    fn mat_add(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()), "matrix sum dimension mismatch");
        let data = a.entries().iter().zip(b.entries()).map(|(x, y)| self.add(x, y)).collect();
        Matrix::from_vec(a.rows(), a.cols(), data)
    }

    fn mat_neg(&self, a: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        a.map(|x| self.neg(x))
    }

    fn mat_sub(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        self.mat_add(a, &self.mat_neg(b))
    }

    fn mat_is_zero(&self, a: &Matrix<Self::Elem>) -> bool {
        a.entries().iter().all(|x| self.is_zero(x))
    }

    /// Block diagonal `[[a, 0], [0, b]]`.
    fn block_diag(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        let top = a.hstack(&self.zeros(a.rows(), b.cols()));
        let bottom = self.zeros(b.rows(), a.cols()).hstack(b);
        top.vstack(&bottom)
    }
}

/// Result of [`Ring::minimal_presentation`]: the reduced presentation together
/// with mutually inverse module isomorphisms (as generator matrices).
#[derive(Clone, Debug)]
pub struct MinimalForm<E> {
    pub n_gens: usize,
    pub relations: Matrix<E>,
    /// Old generators expressed in the new ones (`old x new`).
    pub to_min: Matrix<E>,
    /// New generators expressed in the old ones (`new x old`).
    pub from_min: Matrix<E>,
}

/// A projective `Q` (given by a presentation) with an epimorphism onto a module.
#[derive(Clone, Debug)]
pub struct CoverData<E> {
    pub n_gens: usize,
    /// `Q = ⊕ R e_j`.
    pub idempotents: Vec<E>,
    pub relations: Matrix<E>,
    /// `Q`-generators expressed in the target module's generators.
    pub epi: Matrix<E>,
}

/// Canonical form of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalDecomposition {
    pub free_rank: usize,
    /// Invariant factors `d_1 | d_2 | ... | d_t`, each `> 1`.
    pub factors: Vec<num_bigint::BigInt>,
}

impl CanonicalDecomposition {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.factors.is_empty()
    }
}

impl std::fmt::Display for CanonicalDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Isomorphism invariant of a module. Over the integers this is a complete
/// invariant; over an algebra it records the dimension vector and the top.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleInvariant {
    Abelian(CanonicalDecomposition),
    Fd { dimension_vector: Vec<usize>, top: Vec<usize> },
}

impl ModuleInvariant {
    pub fn is_zero(&self) -> bool {
        match self {
            ModuleInvariant::Abelian(c) => c.is_zero(),
            ModuleInvariant::Fd { dimension_vector, .. } => dimension_vector.iter().all(|&d| d == 0),
        }
    }

    /// Total F_p-dimension (fd backends only).
    pub fn dimension(&self) -> Option<usize> {
        match self {
            ModuleInvariant::Abelian(_) => None,
            ModuleInvariant::Fd { dimension_vector, .. } => Some(dimension_vector.iter().sum()),
        }
    }
}

impl std::fmt::Display for ModuleInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModuleInvariant::Abelian(c) => write!(f, "{c}"),
            ModuleInvariant::Fd { dimension_vector, top } => {
                write!(f, "dim {:?} top {:?}", dimension_vector, top)
            }
        }
    }
}

/// Matrix of the dual map `Hom(-, R)` between free modules: transpose with
/// every entry sent through the opposite-ring element map. The result lives
/// over `ring.opposite()`.
pub fn opposite_transfer<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.transpose().map(|x| ring.op_elem(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integers::Integers;

    #[test]
    fn stacking_handles_empty_blocks() {
        let z = Integers;
        let a = z.identity(2);
        let e = z.zeros(0, 2);
        assert_eq!(a.vstack(&e), a);
        let b = z.zeros(2, 0);
        assert_eq!(a.hstack(&b), a);
        assert_eq!(z.mat_mul(&z.zeros(3, 0), &z.zeros(0, 4)), z.zeros(3, 4));
    }

    #[test]
    fn side_flip_is_involutive() {
        assert_eq!(Side::Left.flip(), Side::Right);
        assert_eq!(Side::Left.flip().flip(), Side::Left);
    }
}
