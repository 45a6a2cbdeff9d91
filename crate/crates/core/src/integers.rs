//! The integer backend: Hermite normal form for kernels and solving, Smith
//! normal form for invariant factors and minimal presentations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{HalgError, Result};
use crate::ring::{
    BackendKind, CanonicalDecomposition, CoverData, Matrix, MinimalForm, ModuleInvariant, Ring,
};

/// The ring of integers. All values compare equal: there is one instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

pub type IntMatrix = Matrix<BigInt>;

/// Row-style Hermite normal form: `U * A = H` with `U` unimodular and `H` in
/// reduced row echelon form (positive pivots, entries above pivots reduced
/// into `[0, pivot)`).
#[derive(Clone, Debug)]
pub struct Hermite {
    pub u: IntMatrix,
    pub h: IntMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn to_rows(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..a.rows()).map(|i| a.row_vec(i)).collect()
}

fn row_axpy(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(src.iter()) {
        *t -= q * s;
    }
}

pub fn hermite_normal_form(a: &IntMatrix) -> Hermite {
    let m = a.rows();
    let n = a.cols();
    let mut h = to_rows(a);
    let mut u = to_rows(&Integers.identity(m));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let best = (row..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(p) = best else { break };
            h.swap(row, p);
            u.swap(row, p);
            let mut clean = true;
            for i in row + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[row][col]);
                row_axpy(&mut h, i, row, &q);
                row_axpy(&mut u, i, row, &q);
                if !h[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            for x in h[row].iter_mut() {
                *x = -x.clone();
            }
            for x in u[row].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..row {
            let q = h[i][col].div_floor(&h[row][col]);
            row_axpy(&mut h, i, row, &q);
            row_axpy(&mut u, i, row, &q);
        }
        pivots.push(col);
        row += 1;
    }
    Hermite { u: Matrix::from_rows(m, u), h: Matrix::from_rows(n, h), pivots }
}

/// Smith normal form `S = U * A * V` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    /// Diagonal entries `S[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let m = a.rows();
    let n = a.cols();
    let mut s = to_rows(a);
    let mut u = to_rows(&Integers.identity(m));
    let mut v = to_rows(&Integers.identity(n)); // stored transposed: v[j] is column j
    let mut vinv = to_rows(&Integers.identity(n));

    let col_axpy = |s: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, vinv: &mut Vec<Vec<BigInt>>, j: usize, t: usize, q: &BigInt| {
        // column j -= q * column t
        for r in s.iter_mut() {
            let x = q * &r[t];
            r[j] -= x;
        }
        row_axpy(v, j, t, q);
        // V^{-1}: row t += q * row j
        let neg = -q.clone();
        row_axpy(vinv, t, j, &neg);
    };
    let col_swap = |s: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, vinv: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for r in s.iter_mut() {
            r.swap(i, j);
        }
        v.swap(i, j);
        vinv.swap(i, j);
    };

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if s[bi][bj].abs() <= s[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            s.swap(t, pi);
            u.swap(t, pi);
            if pj != t {
                col_swap(&mut s, &mut v, &mut vinv, t, pj);
            }
            let mut done = true;
            for i in t + 1..m {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = s[i][t].div_floor(&s[t][t]);
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !s[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..n {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = s[t][j].div_floor(&s[t][t]);
                col_axpy(&mut s, &mut v, &mut vinv, j, t, &q);
                if !s[t][j].is_zero() {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[i][j].is_multiple_of(&s[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut s, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if t < m && s[t][t].is_negative() {
            for x in s[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let v = Matrix::from_rows(n, v).transpose();
    Smith {
        u: Matrix::from_rows(m, u),
        s: Matrix::from_rows(n, s),
        v,
        v_inv: Matrix::from_rows(n, vinv),
    }
}

/// Determinant by fraction-free elimination (Bareiss); used by tests and
/// certificate checks on unimodular transforms.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = to_rows(a);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = val / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Canonical decomposition of `Z^n_gens / rowspan(rel)`.
pub fn canonical_decomposition(n_gens: usize, rel: &IntMatrix) -> CanonicalDecomposition {
    assert_eq!(rel.cols(), n_gens);
    let snf = smith_normal_form(rel);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let factors = diag.into_iter().filter(|d| *d > BigInt::one()).collect();
    CanonicalDecomposition { free_rank: n_gens - rank, factors }
}

impl Ring for Integers {
    type Elem = BigInt;
    type Base = Integers;

    fn kind(&self) -> BackendKind {
        BackendKind::Integers
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn opposite(&self) -> Self {
        Integers
    }
    fn op_elem(&self, a: &BigInt) -> BigInt {
        a.clone()
    }

    fn kernel_gens(&self, a: &IntMatrix) -> IntMatrix {
        let hnf = hermite_normal_form(a);
        let kernel = hnf.u.row_range(hnf.rank(), a.rows());
        self.reduce_generators(&kernel)
    }

    fn solve(&self, a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(a.cols(), b.cols(), "solve: column mismatch");
        let hnf = hermite_normal_form(a);
        let m = a.rows();
        let mut out = Vec::with_capacity(b.rows());
        for r in 0..b.rows() {
            let target = b.row(r);
            let mut y = vec![BigInt::zero(); m];
            for (k, &p) in hnf.pivots.iter().enumerate() {
                let mut acc = target[p].clone();
                for (l, yl) in y.iter().enumerate().take(k) {
                    acc -= yl * hnf.h.get(l, p);
                }
                let (q, rem) = acc.div_rem(hnf.h.get(k, p));
                if !rem.is_zero() {
                    return None;
                }
                y[k] = q;
            }
            let ym = Matrix::from_rows(m, vec![y]);
            if self.mat_mul(&ym, &hnf.h).row(0) != target {
                return None;
            }
            out.push(self.mat_mul(&ym, &hnf.u).row_vec(0));
        }
        Some(Matrix::from_rows(m, out))
    }

    fn reduce_generators(&self, rows: &IntMatrix) -> IntMatrix {
        let hnf = hermite_normal_form(rows);
        hnf.h.row_range(0, hnf.rank())
    }

    fn minimal_presentation(&self, n_gens: usize, rel: &IntMatrix) -> MinimalForm<BigInt> {
        let snf = smith_normal_form(rel);
        let diag = snf.diagonal();
        let d = |i: usize| diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let kept: Vec<usize> = (0..n_gens).filter(|&i| !d(i).is_one()).collect();
        let mut relations = Vec::new();
        for (pos, &i) in kept.iter().enumerate() {
            let di = d(i);
            if di > BigInt::one() {
                let mut row = vec![BigInt::zero(); kept.len()];
                row[pos] = di;
                relations.push(row);
            }
        }
        let to_min = Matrix::from_rows(
            kept.len(),
            (0..n_gens).map(|j| kept.iter().map(|&i| snf.v.get(j, i).clone()).collect()).collect(),
        );
        let from_min = snf.v_inv.select_rows(&kept);
        MinimalForm {
            n_gens: kept.len(),
            relations: Matrix::from_rows(kept.len(), relations),
            to_min,
            from_min,
        }
    }

    fn invariant(&self, n_gens: usize, rel: &IntMatrix) -> ModuleInvariant {
        ModuleInvariant::Abelian(canonical_decomposition(n_gens, rel))
    }

    fn is_projective(&self, n_gens: usize, rel: &IntMatrix) -> bool {
        canonical_decomposition(n_gens, rel).factors.is_empty()
    }

    fn projective_cover(&self, n_gens: usize, rel: &IntMatrix) -> CoverData<BigInt> {
        let min = self.minimal_presentation(n_gens, rel);
        CoverData { n_gens: min.n_gens, idempotents: vec![BigInt::one(); min.n_gens], relations: self.zeros(0, min.n_gens), epi: min.from_min }
    }

    fn vertex_idempotents(&self) -> Vec<BigInt> {
        vec![BigInt::one()]
    }

    fn in_radical(&self, a: &BigInt) -> bool {
        !(a.is_one() || (-a).is_one())
    }

    fn base(&self) -> Integers {
        Integers
    }
    fn base_dim(&self) -> usize {
        1
    }
    fn to_base(&self, a: &BigInt) -> Vec<BigInt> {
        vec![a.clone()]
    }
    fn from_base(&self, coords: &[BigInt]) -> BigInt {
        coords[0].clone()
    }
    fn left_mul_matrix(&self, a: &BigInt) -> IntMatrix {
        Matrix::from_vec(1, 1, vec![a.clone()])
    }
    fn right_mul_matrix(&self, a: &BigInt) -> IntMatrix {
        Matrix::from_vec(1, 1, vec![a.clone()])
    }

    fn format_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<BigInt> {
        let t = s.trim();
        let t = t.strip_prefix('+').unwrap_or(t);
        t.parse::<BigInt>().map_err(|e| HalgError::Parse(format!("integer element {s:?}: {e}")))
    }

    fn has_injectives(&self) -> bool {
        false
    }
}

/// Convenience: integer matrix from small literals.
pub fn int_matrix(cols: usize, rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IntMatrix) -> Smith {
        let z = Integers;
        let snf = smith_normal_form(a);
        assert_eq!(z.mat_mul(&z.mat_mul(&snf.u, a), &snf.v), snf.s);
        assert!(determinant(&snf.u).abs().is_one());
        assert!(determinant(&snf.v).abs().is_one());
        assert_eq!(z.mat_mul(&snf.v, &snf.v_inv), z.identity(a.cols()));
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        snf
    }

    #[test]
    fn smith_examples() {
        let zero = int_matrix(3, &[&[0, 0, 0], &[0, 0, 0]]);
        let snf = check_smith(&zero);
        assert!(Integers.mat_is_zero(&snf.s));
        assert_eq!(snf.u, Integers.identity(2));
        assert_eq!(snf.v, Integers.identity(3));

        let snf = check_smith(&int_matrix(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);

        let snf = check_smith(&int_matrix(2, &[&[2, 4], &[0, 2]]));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn kernel_examples() {
        let z = Integers;
        assert_eq!(z.kernel_gens(&int_matrix(1, &[&[2]])).rows(), 0);
        let k = z.kernel_gens(&int_matrix(1, &[&[1], &[1]]));
        assert_eq!(k.rows(), 1);
        let v = k.row_vec(0);
        assert!(v == vec![BigInt::from(1), BigInt::from(-1)] || v == vec![BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn solve_examples() {
        let z = Integers;
        let a = int_matrix(2, &[&[2, 0], &[0, 3]]);
        let x = z.solve(&a, &int_matrix(2, &[&[2, 3]])).unwrap();
        assert_eq!(x, int_matrix(2, &[&[1, 1]]));
        assert!(z.solve(&int_matrix(1, &[&[2]]), &int_matrix(1, &[&[1]])).is_none());
        let zero = z.zeros(2, 2);
        assert_eq!(z.solve(&a, &zero).unwrap(), zero);
    }

    #[test]
    fn canonical_decomposition_examples() {
        let c = canonical_decomposition(2, &int_matrix(2, &[&[2, 0]]));
        assert_eq!(c, CanonicalDecomposition { free_rank: 1, factors: vec![BigInt::from(2)] });
        let c = canonical_decomposition(3, &Integers.zeros(0, 3));
        assert_eq!(c, CanonicalDecomposition { free_rank: 3, factors: vec![] });
        let c = canonical_decomposition(1, &int_matrix(1, &[&[1]]));
        assert!(c.is_zero());
    }

    #[test]
    fn minimal_presentation_drops_units() {
        let z = Integers;
        let rel = int_matrix(2, &[&[2, 0], &[0, 3]]);
        let min = z.minimal_presentation(2, &rel);
        assert_eq!(min.n_gens, 1);
        assert_eq!(canonical_decomposition(1, &min.relations), canonical_decomposition(2, &rel));
        // from_min * to_min is the identity on the minimal module's generators.
        let round = z.mat_mul(&min.from_min, &min.to_min);
        let diff = z.mat_sub(&round, &z.identity(1));
        assert!(z.solve(&min.relations, &diff).is_some());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&int_matrix(2, &[&[2, 1], &[1, 1]])), BigInt::from(1));
        assert_eq!(determinant(&int_matrix(3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])), BigInt::from(-5));
    }
}
