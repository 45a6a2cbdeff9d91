//! Dense linear algebra over a prime field `F_p`, row-vector convention.

/// A prime field. Elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        Fp { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// `y += c * x`.
    pub fn axpy(&self, y: &mut [u64], c: u64, x: &[u64]) {
        if c == 0 {
            return;
        }
        for (a, &b) in y.iter_mut().zip(x) {
            *a = (*a + c * b) % self.p;
        }
    }

    /// `v * m` for a row vector `v` and a matrix given by rows.
    pub fn vec_mat(&self, v: &[u64], m: &[Vec<u64>], cols: usize) -> Vec<u64> {
        let mut out = vec![0; cols];
        for (c, row) in v.iter().zip(m) {
            self.axpy(&mut out, *c, row);
        }
        out
    }

    pub fn mat_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
        a.iter().map(|r| self.vec_mat(r, b, cols)).collect()
    }
}

/// Reduced row echelon form of a set of row vectors, kept incrementally.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Fp,
    width: usize,
    /// Rows with leading 1 at `pivots[i]`, fully reduced against each other.
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Fp, width: usize) -> Echelon {
        Echelon { field, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<'a>(field: Fp, width: usize, rows: impl IntoIterator<Item = &'a Vec<u64>>) -> Echelon {
        let mut e = Echelon::new(field, width);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Remainder of `v` after elimination against the stored rows; zero iff
    /// `v` lies in the span.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                self.field.axpy(&mut w, self.field.neg(c), row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else { return false };
        let inv = self.field.inv(w[p]);
        for x in w.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                self.field.axpy(row, self.field.neg(c), &w);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, w);
        true
    }

    /// Columns without a pivot; unit vectors at these positions give a basis
    /// of a complement of the span.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.width - self.rank());
        let mut it = self.pivots.iter().peekable();
        for c in 0..self.width {
            if it.peek() == Some(&&c) {
                it.next();
            } else {
                out.push(c);
            }
        }
        out
    }
}

/// Vectors `v` with `v * a = 0`, where `a` has `rows` rows of width `cols`.
pub fn left_nullspace(field: Fp, a: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let m = a.len();
    // Row-reduce [a | I] and keep the identity part of rows whose a-part vanished.
    let mut work: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut w = r.clone();
            w.resize(cols + m, 0);
            w[cols + i] = 1;
            w
        })
        .collect();
    let mut lead = 0;
    for c in 0..cols {
        let Some(p) = (lead..m).find(|&i| work[i][c] != 0) else { continue };
        work.swap(lead, p);
        let inv = field.inv(work[lead][c]);
        for x in work[lead].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = work[lead].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i != lead && row[c] != 0 {
                let k = field.neg(row[c]);
                field.axpy(row, k, &pivot_row);
            }
        }
        lead += 1;
        if lead == m {
            break;
        }
    }
    work.into_iter().skip(lead).map(|w| w[cols..].to_vec()).collect()
}

/// One `v` with `v * a = b`, if any.
pub fn solve_left(field: Fp, a: &[Vec<u64>], cols: usize, b: &[u64]) -> Option<Vec<u64>> {
    let m = a.len();
    // Eliminate on [a | I] while tracking combinations; then express b.
    let mut work: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut w = r.clone();
            w.resize(cols + m, 0);
            w[cols + i] = 1;
            w
        })
        .collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..cols {
        if lead == m {
            break;
        }
        let Some(p) = (lead..m).find(|&i| work[i][c] != 0) else { continue };
        work.swap(lead, p);
        let inv = field.inv(work[lead][c]);
        for x in work[lead].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = work[lead].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i != lead && row[c] != 0 {
                let k = field.neg(row[c]);
                field.axpy(row, k, &pivot_row);
            }
        }
        pivots.push(c);
        lead += 1;
    }
    let mut residual = b.to_vec();
    let mut combo = vec![0u64; m];
    for (r, &c) in pivots.iter().enumerate() {
        let coef = residual[c];
        if coef == 0 {
            continue;
        }
        let row = &work[r];
        field.axpy(&mut residual, field.neg(coef), &row[..cols]);
        field.axpy(&mut combo, coef, &row[cols..]);
    }
    if residual.iter().all(|&x| x == 0) {
        Some(combo)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_negation() {
        let f = Fp::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
    }

    #[test]
    fn nullspace_and_solve() {
        let f = Fp::new(3);
        let a = vec![vec![1, 2], vec![2, 1], vec![0, 0]];
        let ns = left_nullspace(f, &a, 2);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(f.vec_mat(v, &a, 2), vec![0, 0]);
        }
        let x = solve_left(f, &a, 2, &[2, 1]).unwrap();
        assert_eq!(f.vec_mat(&x, &a, 2), vec![2, 1]);
        assert!(solve_left(f, &[vec![1, 1]], 2, &[1, 0]).is_none());
    }

    #[test]
    fn echelon_complement() {
        let f = Fp::new(2);
        let e = Echelon::from_rows(f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.free_columns(), vec![2]);
        assert!(e.contains(&[1, 0, 1]));
        assert!(!e.contains(&[0, 0, 1]));
    }
}
