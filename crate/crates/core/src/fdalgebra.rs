//! Finite-dimensional basic algebras over a prime field, given as bound
//! quiver algebras (or, behind `trusted_radical`, as raw structure constants).
//!
//! Path notation is function-style: `b*a` is the path "a then b". A path of
//! length zero at vertex `v` is the idempotent `e<v>`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{HalgError, Result};
use crate::fp::{left_nullspace, solve_left, Echelon, Fp};
use crate::ring::{BackendKind, CoverData, Matrix, MinimalForm, ModuleInvariant, Ring};

/// User-facing description of a bound quiver algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    pub p: u64,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub relations: Vec<String>,
    pub nilpotency_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// Raw structure constants with a caller-asserted radical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstantsSpec {
    pub p: u64,
    pub dim: usize,
    /// `table[i][j]` = coordinates of `b_i * b_j`.
    pub table: Vec<Vec<Vec<i64>>>,
    pub idempotents: Vec<usize>,
    pub radical: Vec<usize>,
    pub trusted_radical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Quiver(QuiverSpec),
    StructureConstants(StructureConstantsSpec),
}

/// A path: source vertex and arrows in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(String, usize, usize)>,
}

impl Quiver {
    fn target(&self, path: &Path) -> usize {
        path.arrows.last().map_or(path.source, |&a| self.arrows[a].2)
    }

    /// `p * q` = "q then p", if composable.
    fn compose(&self, p: &Path, q: &Path) -> Option<Path> {
        if self.target(q) != p.source {
            return None;
        }
        let mut arrows = q.arrows.clone();
        arrows.extend(&p.arrows);
        Some(Path { source: q.source, arrows })
    }

    fn name(&self, path: &Path) -> String {
        if path.arrows.is_empty() {
            format!("e{}", self.vertices[path.source])
        } else {
            path.arrows.iter().rev().map(|&a| self.arrows[a].0.as_str()).collect::<Vec<_>>().join("*")
        }
    }

    fn reversed(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self.arrows.iter().map(|(n, s, t)| (n.clone(), *t, *s)).collect(),
        }
    }

    fn reverse_path(&self, path: &Path) -> Path {
        Path { source: self.target(path), arrows: path.arrows.iter().rev().copied().collect() }
    }
}

/// A path-algebra element: sparse map from paths to coefficients in `F_p`.
type PathElem = BTreeMap<Path, u64>;

/// A finite-dimensional basic algebra with a distinguished basis containing
/// the vertex idempotents, whose remaining elements span the radical.
#[derive(Clone, Debug)]
pub struct BoundQuiverAlgebra {
    spec: AlgebraSpec,
    field: Fp,
    names: Vec<String>,
    /// Basis paths (quiver presentations only).
    paths: Vec<Path>,
    quiver: Option<Quiver>,
    /// Coordinates of every path shorter than the nilpotency bound.
    reduction: HashMap<Path, Vec<u64>>,
    nilpotency_bound: usize,
    /// `table[i][j]`: sparse coordinates of `b_i * b_j`.
    table: Vec<Vec<Vec<(usize, u64)>>>,
    vertices: Vec<usize>,
    radical: Vec<usize>,
    opposite: bool,
}

impl BoundQuiverAlgebra {
    pub fn build(spec: &AlgebraSpec) -> Result<BoundQuiverAlgebra> {
        match spec {
            AlgebraSpec::Quiver(q) => build_quiver_algebra(q),
            AlgebraSpec::StructureConstants(s) => build_structure_constants(s),
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_idempotents(&self) -> &[usize] {
        &self.vertices
    }

    pub fn radical_basis(&self) -> &[usize] {
        &self.radical
    }

    pub fn nilpotency_bound(&self) -> usize {
        self.nilpotency_bound
    }

    pub fn is_opposite(&self) -> bool {
        self.opposite
    }

    /// Sparse coordinates of `b_i * b_j`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, u64)] {
        &self.table[i][j]
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = f.mul(x, y);
                for &(k, v) in &self.table[i][j] {
                    out[k] = f.add(out[k], f.mul(c, v));
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        for &e in &self.vertices {
            v[e] = 1;
        }
        v
    }

    /// Exhaustive associativity check on basis triples.
    pub fn check_associative(&self) -> bool {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul(&self.unit(i), &self.unit(j));
                for k in 0..d {
                    let left = self.mul(&ij, &self.unit(k));
                    let jk = self.mul(&self.unit(j), &self.unit(k));
                    if left != self.mul(&self.unit(i), &jk) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Idempotents are orthogonal, sum to one, and one is a two-sided unit.
    pub fn check_idempotents(&self) -> bool {
        let one = self.one();
        for (a, &i) in self.vertices.iter().enumerate() {
            for (b, &j) in self.vertices.iter().enumerate() {
                let prod = self.mul(&self.unit(i), &self.unit(j));
                let expect = if a == b { self.unit(i) } else { vec![0; self.dim()] };
                if prod != expect {
                    return false;
                }
            }
        }
        (0..self.dim()).all(|k| {
            let u = self.unit(k);
            self.mul(&one, &u) == u && self.mul(&u, &one) == u
        })
    }

    /// The radical basis spans a nilpotent two-sided ideal.
    pub fn check_radical(&self) -> bool {
        let f = self.field;
        let width = self.dim();
        let span = Echelon::from_rows(f, width, &self.radical.iter().map(|&r| self.unit(r)).collect::<Vec<_>>());
        for &r in &self.radical {
            for b in 0..self.dim() {
                if !span.contains(&self.mul(&self.unit(r), &self.unit(b))) || !span.contains(&self.mul(&self.unit(b), &self.unit(r))) {
                    return false;
                }
            }
        }
        // rad^(dim+1) = 0
        let mut power: Vec<Vec<u64>> = self.radical.iter().map(|&r| self.unit(r)).collect();
        for _ in 0..self.dim() {
            let mut next = Echelon::new(f, width);
            for x in &power {
                for &r in &self.radical {
                    next.insert(&self.mul(x, &self.unit(r)));
                }
            }
            power = next.basis().to_vec();
            if power.is_empty() {
                return true;
            }
        }
        power.is_empty()
    }

    /// The opposite algebra: same basis, transposed table, reversed arrows.
    pub fn opposite(&self) -> BoundQuiverAlgebra {
        let d = self.dim();
        let table = (0..d).map(|i| (0..d).map(|j| self.table[j][i].clone()).collect()).collect();
        let (quiver, paths, names, reduction, spec) = match &self.quiver {
            Some(q) => {
                let rq = q.reversed();
                let paths: Vec<Path> = self.paths.iter().map(|p| q.reverse_path(p)).collect();
                let names = paths.iter().map(|p| rq.name(p)).collect();
                let reduction = self.reduction.iter().map(|(p, c)| (q.reverse_path(p), c.clone())).collect();
                let spec = match &self.spec {
                    AlgebraSpec::Quiver(s) => AlgebraSpec::Quiver(QuiverSpec {
                        p: s.p,
                        vertices: s.vertices.clone(),
                        arrows: s
                            .arrows
                            .iter()
                            .map(|a| ArrowSpec { name: a.name.clone(), from: a.to.clone(), to: a.from.clone() })
                            .collect(),
                        relations: s.relations.iter().map(|r| reverse_expression(r)).collect(),
                        nilpotency_bound: s.nilpotency_bound,
                    }),
                    other => other.clone(),
                };
                (Some(rq), paths, names, reduction, spec)
            }
            None => {
                let spec = match &self.spec {
                    AlgebraSpec::StructureConstants(s) => {
                        let mut t = s.clone();
                        t.table = (0..d).map(|i| (0..d).map(|j| s.table[j][i].clone()).collect()).collect();
                        AlgebraSpec::StructureConstants(t)
                    }
                    other => other.clone(),
                };
                (None, Vec::new(), self.names.clone(), HashMap::new(), spec)
            }
        };
        BoundQuiverAlgebra {
            spec,
            field: self.field,
            names,
            paths,
            quiver,
            reduction,
            nilpotency_bound: self.nilpotency_bound,
            table,
            vertices: self.vertices.clone(),
            radical: self.radical.clone(),
            opposite: !self.opposite,
        }
    }

    /// Basis-wise equality of structure (names, table, idempotents).
    pub fn same_structure(&self, other: &BoundQuiverAlgebra) -> bool {
        self.names == other.names && self.table == other.table && self.vertices == other.vertices && self.radical == other.radical
    }

    fn format(&self, a: &[u64]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| if c == 1 { self.names[i].clone() } else { format!("{c}*{}", self.names[i]) })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    fn parse(&self, s: &str) -> Result<Vec<u64>> {
        match &self.quiver {
            Some(q) => {
                let elem = parse_path_expression(q, self.field, s)?;
                let mut out = vec![0; self.dim()];
                for (path, c) in elem {
                    if path.len() >= self.nilpotency_bound {
                        continue;
                    }
                    let coords = self
                        .reduction
                        .get(&path)
                        .ok_or_else(|| HalgError::Parse(format!("path {} outside the algebra", q.name(&path))))?;
                    self.field.axpy(&mut out, c, coords);
                }
                Ok(out)
            }
            None => parse_basis_expression(&self.names, self.field, &self.one(), |a, b| self.mul(a, b), s),
        }
    }
}

/// Reverse the factor order of every monomial in an expression (used to
/// describe relations of the opposite algebra).
fn reverse_expression(s: &str) -> String {
    let mut out = String::new();
    let mut term = String::new();
    let flush = |term: &mut String, out: &mut String| {
        let t = term.trim();
        if !t.is_empty() {
            let mut factors: Vec<&str> = t.split('*').map(str::trim).collect();
            let coef = if factors.len() > 1 && factors[0].chars().all(|c| c.is_ascii_digit()) {
                Some(factors.remove(0))
            } else {
                None
            };
            factors.reverse();
            if let Some(c) = coef {
                out.push_str(c);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
        term.clear();
    };
    for ch in s.chars() {
        if ch == '+' || ch == '-' {
            flush(&mut term, &mut out);
            out.push(' ');
            out.push(ch);
            out.push(' ');
        } else {
            term.push(ch);
        }
    }
    flush(&mut term, &mut out);
    out.trim().trim_start_matches("+ ").to_string()
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<i64>().map_err(|e| HalgError::Parse(format!("coefficient {text}: {e}")))?;
                out.push(Token::Int(n));
            }
            a if a.is_alphanumeric() || a == '_' || a == '\'' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(HalgError::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

/// Generic sum-of-products parser. `atom` resolves identifiers; elements are
/// combined with `add`, `scale`, `mul`.
fn parse_sum_of_products<E: Clone>(
    s: &str,
    one: E,
    atom: &dyn Fn(&str) -> Result<E>,
    add: &dyn Fn(&E, &E) -> E,
    scale: &dyn Fn(i64, &E) -> E,
    mul: &dyn Fn(&E, &E) -> E,
    zero: E,
) -> Result<E> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(HalgError::Parse("empty element expression".into()));
    }
    let mut acc = zero;
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = 1i64;
        match tokens[pos] {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -1;
                pos += 1
            }
            _ if first => {}
            _ => return Err(HalgError::Parse(format!("expected + or - in {s:?}"))),
        }
        first = false;
        let mut term = one.clone();
        let mut coef = sign;
        let mut expect_factor = true;
        while pos < tokens.len() {
            match &tokens[pos] {
                Token::Int(n) if expect_factor => {
                    coef = coef.checked_mul(*n).ok_or_else(|| HalgError::Parse("coefficient overflow".into()))?;
                    expect_factor = false;
                }
                Token::Ident(name) if expect_factor => {
                    term = mul(&term, &atom(name)?);
                    expect_factor = false;
                }
                Token::Star if !expect_factor => expect_factor = true,
                Token::Plus | Token::Minus if !expect_factor => break,
                _ => return Err(HalgError::Parse(format!("malformed expression {s:?}"))),
            }
            pos += 1;
        }
        if expect_factor {
            return Err(HalgError::Parse(format!("dangling operator in {s:?}")));
        }
        acc = add(&acc, &scale(coef, &term));
    }
    Ok(acc)
}

fn parse_path_expression(q: &Quiver, field: Fp, s: &str) -> Result<PathElem> {
    let one: PathElem = (0..q.vertices.len()).map(|v| (Path { source: v, arrows: vec![] }, 1)).collect();
    let atom = |name: &str| -> Result<PathElem> {
        if let Some(a) = q.arrows.iter().position(|(n, _, _)| n == name) {
            let mut e = PathElem::new();
            e.insert(Path { source: q.arrows[a].1, arrows: vec![a] }, 1);
            return Ok(e);
        }
        if let Some(rest) = name.strip_prefix('e') {
            if let Some(v) = q.vertices.iter().position(|n| n == rest) {
                let mut e = PathElem::new();
                e.insert(Path { source: v, arrows: vec![] }, 1);
                return Ok(e);
            }
        }
        Err(HalgError::Parse(format!("unknown arrow or vertex {name:?}")))
    };
    let add = |a: &PathElem, b: &PathElem| {
        let mut out = a.clone();
        for (p, &c) in b {
            let v = out.entry(p.clone()).or_insert(0);
            *v = field.add(*v, c);
        }
        out.retain(|_, c| *c != 0);
        out
    };
    let scale = |n: i64, a: &PathElem| {
        let k = field.reduce(n);
        let mut out: PathElem = a.iter().map(|(p, &c)| (p.clone(), field.mul(c, k))).collect();
        out.retain(|_, c| *c != 0);
        out
    };
    let mul = |a: &PathElem, b: &PathElem| {
        let mut out = PathElem::new();
        for (p, &x) in a {
            for (r, &y) in b {
                if let Some(pr) = q.compose(p, r) {
                    let v = out.entry(pr).or_insert(0);
                    *v = field.add(*v, field.mul(x, y));
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    };
    parse_sum_of_products(s, one, &atom, &add, &scale, &mul, PathElem::new())
}

fn parse_basis_expression(
    names: &[String],
    field: Fp,
    one: &[u64],
    mul: impl Fn(&[u64], &[u64]) -> Vec<u64>,
    s: &str,
) -> Result<Vec<u64>> {
    let d = names.len();
    let atom = |name: &str| -> Result<Vec<u64>> {
        let i = names.iter().position(|n| n == name).ok_or_else(|| HalgError::Parse(format!("unknown basis element {name:?}")))?;
        let mut v = vec![0; d];
        v[i] = 1;
        Ok(v)
    };
    let add = |a: &Vec<u64>, b: &Vec<u64>| a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect();
    let scale = |n: i64, a: &Vec<u64>| {
        let k = field.reduce(n);
        a.iter().map(|&x| field.mul(x, k)).collect()
    };
    let m = |a: &Vec<u64>, b: &Vec<u64>| mul(a, b);
    parse_sum_of_products(s, one.to_vec(), &atom, &add, &scale, &m, vec![0; d])
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

const MAX_PATHS: usize = 20_000;

fn build_quiver_algebra(spec: &QuiverSpec) -> Result<BoundQuiverAlgebra> {
    if !is_prime(spec.p) || spec.p > (1 << 31) {
        return Err(HalgError::Parse(format!("p = {} is not a supported prime", spec.p)));
    }
    let field = Fp::new(spec.p);
    let vertex = |name: &str| {
        spec.vertices.iter().position(|v| v == name).ok_or_else(|| HalgError::Parse(format!("unknown vertex {name:?}")))
    };
    let mut arrows = Vec::new();
    for a in &spec.arrows {
        if spec.arrows.iter().filter(|b| b.name == a.name).count() > 1 {
            return Err(HalgError::Parse(format!("duplicate arrow name {:?}", a.name)));
        }
        arrows.push((a.name.clone(), vertex(&a.from)?, vertex(&a.to)?));
    }
    if spec.vertices.is_empty() {
        return Err(HalgError::Parse("quiver has no vertices".into()));
    }
    let quiver = Quiver { vertices: spec.vertices.clone(), arrows };

    let mut relations = Vec::new();
    for r in &spec.relations {
        let elem = parse_path_expression(&quiver, field, r)?;
        if elem.is_empty() {
            continue;
        }
        let (first, _) = elem.iter().next().unwrap();
        let ends = (first.source, quiver.target(first));
        for p in elem.keys() {
            if p.len() < 2 {
                return Err(HalgError::BadRelation(format!("{r:?} contains a path of length {} < 2", p.len())));
            }
            if (p.source, quiver.target(p)) != ends {
                return Err(HalgError::BadRelation(format!("{r:?} mixes sources/targets")));
            }
        }
        relations.push(elem);
    }
    let max_len = relations.iter().flat_map(|r| r.keys().map(Path::len)).max().unwrap_or(0);
    let min_len = relations.iter().flat_map(|r| r.keys().map(Path::len)).min().unwrap_or(0);
    let bound = spec
        .nilpotency_bound
        .unwrap_or_else(|| (quiver.arrows.len() * max_len).max(quiver.vertices.len()) + 1);
    let limit = bound + (max_len - min_len);

    // All paths of length <= limit.
    let mut paths: Vec<Path> = (0..quiver.vertices.len()).map(|v| Path { source: v, arrows: vec![] }).collect();
    let mut frontier = paths.clone();
    for _ in 0..limit {
        let mut next = Vec::new();
        for p in &frontier {
            let t = quiver.target(p);
            for (a, arrow) in quiver.arrows.iter().enumerate() {
                if arrow.1 == t {
                    let mut q = p.clone();
                    q.arrows.push(a);
                    next.push(q);
                }
            }
        }
        paths.extend(next.iter().cloned());
        if paths.len() > MAX_PATHS {
            return Err(HalgError::NotAdmissible(format!("more than {MAX_PATHS} paths below length {limit}")));
        }
        frontier = next;
    }
    let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

    // Ideal generators p * rho * q whose terms all stay within the enumerated range.
    let mut gens: Vec<PathElem> = Vec::new();
    for rho in &relations {
        let (first, _) = rho.iter().next().unwrap();
        let (s, t) = (first.source, quiver.target(first));
        for q in paths.iter().filter(|q| quiver.target(q) == s) {
            for p in paths.iter().filter(|p| p.source == t) {
                let mut elem = PathElem::new();
                let mut ok = true;
                for (r, &c) in rho {
                    let full = quiver.compose(p, &quiver.compose(r, q).unwrap()).unwrap();
                    if full.len() > limit {
                        ok = false;
                        break;
                    }
                    elem.insert(full, c);
                }
                if ok {
                    gens.push(elem);
                }
            }
        }
    }

    let width = paths.len();
    let dense = |e: &PathElem| {
        let mut v = vec![0u64; width];
        for (p, &c) in e {
            v[index[p]] = c;
        }
        v
    };
    let ideal = Echelon::from_rows(field, width, &gens.iter().map(dense).collect::<Vec<_>>());
    for p in paths.iter().filter(|p| p.len() == bound) {
        let mut v = vec![0u64; width];
        v[index[p]] = 1;
        if !ideal.contains(&v) {
            return Err(HalgError::NotAdmissible(format!(
                "path {} of length {bound} survives reduction",
                quiver.name(p)
            )));
        }
    }

    // Quotient of the span of short paths by the truncated ideal.
    let short: Vec<Path> = paths.iter().filter(|p| p.len() < bound).cloned().collect();
    let short_index: HashMap<Path, usize> = short.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let sw = short.len();
    let mut truncated = Echelon::new(field, sw);
    for g in &gens {
        if g.keys().map(Path::len).min().unwrap_or(usize::MAX) >= bound {
            continue;
        }
        let mut v = vec![0u64; sw];
        for (p, &c) in g {
            if let Some(&i) = short_index.get(p) {
                v[i] = c;
            }
        }
        truncated.insert(&v);
    }
    let mut span = truncated.clone();
    let mut basis_paths = Vec::new();
    for p in &short {
        let mut v = vec![0u64; sw];
        v[short_index[p]] = 1;
        if span.insert(&v) {
            basis_paths.push(p.clone());
        }
    }
    let reduced_basis: Vec<Vec<u64>> = basis_paths
        .iter()
        .map(|p| {
            let mut v = vec![0u64; sw];
            v[short_index[p]] = 1;
            truncated.reduce(&v)
        })
        .collect();
    let mut reduction = HashMap::new();
    for p in &short {
        let mut v = vec![0u64; sw];
        v[short_index[p]] = 1;
        let r = truncated.reduce(&v);
        let coords = solve_left(field, &reduced_basis, sw, &r).expect("basis spans the quotient");
        reduction.insert(p.clone(), coords);
    }

    let d = basis_paths.len();
    let mut table = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            if let Some(prod) = quiver.compose(&basis_paths[i], &basis_paths[j]) {
                if prod.len() < bound {
                    table[i][j] = reduction[&prod].iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect();
                }
            }
        }
    }
    let vertices: Vec<usize> = (0..quiver.vertices.len())
        .map(|v| basis_paths.iter().position(|p| p.source == v && p.is_empty()).expect("idempotent in basis"))
        .collect();
    let radical = (0..d).filter(|&i| !basis_paths[i].is_empty()).collect();
    let names = basis_paths.iter().map(|p| quiver.name(p)).collect();
    let alg = BoundQuiverAlgebra {
        spec: AlgebraSpec::Quiver(spec.clone()),
        field,
        names,
        paths: basis_paths,
        quiver: Some(quiver),
        reduction,
        nilpotency_bound: bound,
        table,
        vertices,
        radical,
        opposite: false,
    };
    if !alg.check_associative() {
        return Err(HalgError::NotAdmissible("multiplication table is not associative".into()));
    }
    Ok(alg)
}

fn build_structure_constants(spec: &StructureConstantsSpec) -> Result<BoundQuiverAlgebra> {
    if !spec.trusted_radical {
        return Err(HalgError::Parse("structure-constant algebras require \"trusted_radical\": true".into()));
    }
    if !is_prime(spec.p) || spec.p > (1 << 31) {
        return Err(HalgError::Parse(format!("p = {} is not a supported prime", spec.p)));
    }
    let field = Fp::new(spec.p);
    let d = spec.dim;
    if spec.table.len() != d || spec.table.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d)) {
        return Err(HalgError::Parse("structure table must be dim x dim x dim".into()));
    }
    let mut all: Vec<usize> = spec.idempotents.iter().chain(&spec.radical).copied().collect();
    all.sort_unstable();
    if all != (0..d).collect::<Vec<_>>() {
        return Err(HalgError::Parse("idempotents and radical must partition the basis".into()));
    }
    let table = spec
        .table
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.iter().enumerate().map(|(k, &x)| (k, field.reduce(x))).filter(|&(_, x)| x != 0).collect())
                .collect()
        })
        .collect();
    let names = (0..d).map(|i| format!("b{i}")).collect();
    let alg = BoundQuiverAlgebra {
        spec: AlgebraSpec::StructureConstants(spec.clone()),
        field,
        names,
        paths: Vec::new(),
        quiver: None,
        reduction: HashMap::new(),
        nilpotency_bound: d + 1,
        table,
        vertices: spec.idempotents.clone(),
        radical: spec.radical.clone(),
        opposite: false,
    };
    if !alg.check_associative() {
        return Err(HalgError::Parse("structure constants are not associative".into()));
    }
    if !alg.check_idempotents() {
        return Err(HalgError::Parse("idempotents are not orthogonal or do not sum to one".into()));
    }
    if !alg.check_radical() {
        return Err(HalgError::Parse("declared radical is not a nilpotent ideal".into()));
    }
    Ok(alg)
}

struct FdInner {
    alg: BoundQuiverAlgebra,
    op: BoundQuiverAlgebra,
    scalars: Option<FdRing>,
}

/// Ring handle for an algebra or (when `flipped`) its opposite. Two handles
/// are equal iff they share the same build and orientation.
#[derive(Clone)]
pub struct FdRing {
    inner: Arc<FdInner>,
    flipped: bool,
}

impl PartialEq for FdRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) && self.flipped == other.flipped
    }
}

impl std::fmt::Debug for FdRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FdRing(dim {}, p {}{})", self.dim(), self.field().p(), if self.flipped { ", op" } else { "" })
    }
}

pub type FdElem = Vec<u64>;
pub type FdMatrix = Matrix<FdElem>;

impl FdRing {
    pub fn new(alg: BoundQuiverAlgebra) -> FdRing {
        let scalars = if alg.dim() == 1 && alg.quiver.as_ref().is_some_and(|q| q.arrows.is_empty()) {
            None
        } else {
            let spec = QuiverSpec {
                p: alg.field.p(),
                vertices: vec!["".into()],
                arrows: vec![],
                relations: vec![],
                nilpotency_bound: None,
            };
            Some(FdRing::new(build_quiver_algebra(&spec).expect("prime field builds")))
        };
        let op = alg.opposite();
        FdRing { inner: Arc::new(FdInner { alg, op, scalars }), flipped: false }
    }

    pub fn build(spec: &AlgebraSpec) -> Result<FdRing> {
        Ok(FdRing::new(BoundQuiverAlgebra::build(spec)?))
    }

    pub fn from_quiver(spec: &QuiverSpec) -> Result<FdRing> {
        FdRing::build(&AlgebraSpec::Quiver(spec.clone()))
    }

    /// The algebra this handle acts by (the opposite one when flipped).
    pub fn algebra(&self) -> &BoundQuiverAlgebra {
        if self.flipped {
            &self.inner.op
        } else {
            &self.inner.alg
        }
    }

    /// The unflipped algebra, whose notation is used for all element I/O.
    pub fn base_algebra(&self) -> &BoundQuiverAlgebra {
        &self.inner.alg
    }

    pub fn is_flipped(&self) -> bool {
        self.flipped
    }

    pub fn dim(&self) -> usize {
        self.inner.alg.dim()
    }

    pub fn field(&self) -> Fp {
        self.inner.alg.field
    }

    pub fn n_vertices(&self) -> usize {
        self.inner.alg.vertices.len()
    }

    pub fn idempotent(&self, v: usize) -> FdElem {
        self.inner.alg.unit(self.inner.alg.vertices[v])
    }

    pub fn basis_elem(&self, i: usize) -> FdElem {
        self.inner.alg.unit(i)
    }

    pub fn radical_indices(&self) -> &[usize] {
        &self.inner.alg.radical
    }

    /// F_p-dimension of the indecomposable projective `R e_v` of the acting ring.
    pub fn projective_dim(&self, v: usize) -> usize {
        let e = self.idempotent(v);
        (0..self.dim()).filter(|&c| self.mul(&self.basis_elem(c), &e) == self.basis_elem(c)).count()
    }

    /// Flattened F_p matrix of `x |-> x * a` on `R^m -> R^n`; row `(j, c)` is
    /// the image of `b_c` placed in coordinate `j`.
    pub fn flatten(&self, a: &FdMatrix) -> Vec<Vec<u64>> {
        let d = self.dim();
        let mut out = Vec::with_capacity(a.rows() * d);
        for j in 0..a.rows() {
            for c in 0..d {
                let b = self.basis_elem(c);
                let mut row = Vec::with_capacity(a.cols() * d);
                for k in 0..a.cols() {
                    row.extend(self.mul(&b, a.get(j, k)));
                }
                out.push(row);
            }
        }
        out
    }

    pub fn flatten_vec(&self, v: &[FdElem]) -> Vec<u64> {
        v.iter().flat_map(|e| e.iter().copied()).collect()
    }

    pub fn unflatten_vec(&self, v: &[u64]) -> Vec<FdElem> {
        v.chunks(self.dim()).map(|c| c.to_vec()).collect()
    }

    /// F_p basis of the left submodule generated by the rows (all products `b_c * row`).
    pub fn submodule_span(&self, rows: &FdMatrix) -> Echelon {
        let width = rows.cols() * self.dim();
        let mut e = Echelon::new(self.field(), width);
        for r in self.flatten(rows) {
            e.insert(&r);
        }
        e
    }

    /// Unit vector of `R^n` flattened: element `b_c` in coordinate `j`.
    fn flat_unit(&self, n: usize, j: usize, c: usize) -> Vec<u64> {
        let mut v = vec![0; n * self.dim()];
        v[j * self.dim() + c] = 1;
        v
    }

    /// Echelon of `rad * R^n`.
    fn radical_span(&self, n: usize) -> Echelon {
        let mut e = Echelon::new(self.field(), n * self.dim());
        for j in 0..n {
            for &r in self.radical_indices() {
                e.insert(&self.flat_unit(n, j, r));
            }
        }
        e
    }

    /// Top generators `(coordinate j, vertex v)` of `R^n / W`: elements `e_v` placed in
    /// coordinate `j`, independent modulo `rad * R^n + W`.
    fn top_generators(&self, n: usize, w: &Echelon) -> Vec<(usize, usize)> {
        let mut span = self.radical_span(n);
        for b in w.basis() {
            span.insert(b);
        }
        let mut out = Vec::new();
        for j in 0..n {
            for v in 0..self.n_vertices() {
                let idx = self.inner.alg.vertices[v];
                if span.insert(&self.flat_unit(n, j, idx)) {
                    out.push((j, v));
                }
            }
        }
        out
    }

    fn generator_matrix(&self, n: usize, tops: &[(usize, usize)]) -> FdMatrix {
        let rows = tops
            .iter()
            .map(|&(j, v)| {
                let mut r = vec![self.zero(); n];
                r[j] = self.idempotent(v);
                r
            })
            .collect();
        Matrix::from_rows(n, rows)
    }

    fn module_span(&self, n_gens: usize, rel: &FdMatrix) -> Echelon {
        if rel.rows() == 0 {
            Echelon::new(self.field(), n_gens * self.dim())
        } else {
            self.submodule_span(rel)
        }
    }

    /// Dimension vector `dim e_v M` and top dimensions of `R^n / rowspan(rel)`.
    pub fn dimension_data(&self, n_gens: usize, rel: &FdMatrix) -> (Vec<usize>, Vec<usize>) {
        let w = self.module_span(n_gens, rel);
        let mut with_rad = w.clone();
        for b in self.radical_span(n_gens).basis() {
            with_rad.insert(b);
        }
        let mut dims = Vec::new();
        let mut tops = Vec::new();
        for v in 0..self.n_vertices() {
            let e = self.idempotent(v);
            let mut a = w.clone();
            let mut b = with_rad.clone();
            for j in 0..n_gens {
                for c in 0..self.dim() {
                    let bc = self.basis_elem(c);
                    if self.mul(&e, &bc) == bc {
                        let u = self.flat_unit(n_gens, j, c);
                        a.insert(&u);
                        b.insert(&u);
                    }
                }
            }
            dims.push(a.rank() - w.rank());
            tops.push(b.rank() - with_rad.rank());
        }
        (dims, tops)
    }

    /// The scalar field as a one-dimensional algebra.
    pub fn scalars(&self) -> FdRing {
        self.inner.scalars.clone().unwrap_or_else(|| FdRing { inner: self.inner.clone(), flipped: false })
    }
}

impl Ring for FdRing {
    type Elem = FdElem;
    type Base = FdRing;

    fn kind(&self) -> BackendKind {
        BackendKind::BoundQuiver
    }

    fn zero(&self) -> FdElem {
        vec![0; self.dim()]
    }

    fn one(&self) -> FdElem {
        self.inner.alg.one()
    }

    fn add(&self, a: &FdElem, b: &FdElem) -> FdElem {
        let f = self.field();
        a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
    }

    fn neg(&self, a: &FdElem) -> FdElem {
        let f = self.field();
        a.iter().map(|&x| f.neg(x)).collect()
    }

    fn mul(&self, a: &FdElem, b: &FdElem) -> FdElem {
        self.algebra().mul(a, b)
    }

    fn is_zero(&self, a: &FdElem) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn from_int(&self, n: i64) -> FdElem {
        let k = self.field().reduce(n);
        self.one().iter().map(|&x| self.field().mul(x, k)).collect()
    }

    fn opposite(&self) -> Self {
        FdRing { inner: self.inner.clone(), flipped: !self.flipped }
    }

    fn op_elem(&self, a: &FdElem) -> FdElem {
        a.clone()
    }

    fn kernel_gens(&self, a: &FdMatrix) -> FdMatrix {
        let d = self.dim();
        if a.rows() == 0 {
            return self.zeros(0, 0);
        }
        let flat = self.flatten(a);
        let null = left_nullspace(self.field(), &flat, a.cols() * d);
        let rows: Vec<Vec<FdElem>> = null.iter().map(|v| self.unflatten_vec(v)).collect();
        let k = Matrix::from_rows(a.rows(), rows);
        self.reduce_generators(&k)
    }

    fn solve(&self, a: &FdMatrix, b: &FdMatrix) -> Option<FdMatrix> {
        assert_eq!(a.cols(), b.cols(), "solve: column mismatch");
        let d = self.dim();
        let flat = self.flatten(a);
        let mut out = Vec::with_capacity(b.rows());
        for i in 0..b.rows() {
            let target = self.flatten_vec(b.row(i));
            let x = solve_left(self.field(), &flat, a.cols() * d, &target)?;
            // x is a combination of rows (j, c) = b_c in coordinate j.
            out.push(self.unflatten_vec(&x));
        }
        Some(Matrix::from_rows(a.rows(), out))
    }

    fn reduce_generators(&self, rows: &FdMatrix) -> FdMatrix {
        let n = rows.cols();
        let f = self.field();
        let mut span = Echelon::new(f, n * self.dim());
        for r in 0..rows.rows() {
            for &c in self.radical_indices() {
                let b = self.basis_elem(c);
                let v: Vec<FdElem> = rows.row(r).iter().map(|x| self.mul(&b, x)).collect();
                span.insert(&self.flatten_vec(&v));
            }
        }
        let mut chosen = Vec::new();
        for r in 0..rows.rows() {
            for v in 0..self.n_vertices() {
                let e = self.idempotent(v);
                let cand: Vec<FdElem> = rows.row(r).iter().map(|x| self.mul(&e, x)).collect();
                if span.insert(&self.flatten_vec(&cand)) {
                    chosen.push(cand);
                }
            }
        }
        Matrix::from_rows(n, chosen)
    }

    fn minimal_presentation(&self, n_gens: usize, rel: &FdMatrix) -> MinimalForm<FdElem> {
        let w = self.module_span(n_gens, rel);
        let tops = self.top_generators(n_gens, &w);
        let g = self.generator_matrix(n_gens, &tops);
        let t = tops.len();
        let stacked = g.vstack(rel);
        let relations = if stacked.rows() == 0 {
            self.zeros(0, t)
        } else {
            let k = self.kernel_gens(&stacked);
            self.reduce_generators(&k.col_range(0, t))
        };
        let to_min = self
            .solve(&stacked, &self.identity(n_gens))
            .expect("top generators generate the module")
            .col_range(0, t);
        MinimalForm { n_gens: t, relations, to_min, from_min: g }
    }

    fn invariant(&self, n_gens: usize, rel: &FdMatrix) -> ModuleInvariant {
        let (dimension_vector, top) = self.dimension_data(n_gens, rel);
        ModuleInvariant::Fd { dimension_vector, top }
    }

    fn is_projective(&self, n_gens: usize, rel: &FdMatrix) -> bool {
        let (dims, tops) = self.dimension_data(n_gens, rel);
        let dim: usize = dims.iter().sum();
        let cover: usize = tops.iter().enumerate().map(|(v, &t)| t * self.projective_dim(v)).sum();
        dim == cover
    }

    fn projective_cover(&self, n_gens: usize, rel: &FdMatrix) -> CoverData<FdElem> {
        let w = self.module_span(n_gens, rel);
        let tops = self.top_generators(n_gens, &w);
        let t = tops.len();
        let epi = self.generator_matrix(n_gens, &tops);
        let one = self.one();
        let rows: Vec<Vec<FdElem>> = tops
            .iter()
            .enumerate()
            .filter_map(|(i, &(_, v))| {
                let comp = self.sub(&one, &self.idempotent(v));
                if self.is_zero(&comp) {
                    return None;
                }
                let mut r = vec![self.zero(); t];
                r[i] = comp;
                Some(r)
            })
            .collect();
        let idempotents = tops.iter().map(|&(_, v)| self.idempotent(v)).collect();
        CoverData { n_gens: t, idempotents, relations: Matrix::from_rows(t, rows), epi }
    }

    fn vertex_idempotents(&self) -> Vec<FdElem> {
        (0..self.n_vertices()).map(|v| self.idempotent(v)).collect()
    }

    fn in_radical(&self, a: &FdElem) -> bool {
        self.inner.alg.vertices.iter().all(|&v| a[v] == 0)
    }

    fn base(&self) -> FdRing {
        self.scalars()
    }

    fn base_dim(&self) -> usize {
        self.dim()
    }

    fn to_base(&self, a: &FdElem) -> Vec<FdElem> {
        a.iter().map(|&x| vec![x]).collect()
    }

    fn from_base(&self, coords: &[FdElem]) -> FdElem {
        coords.iter().map(|c| c[0]).collect()
    }

    fn left_mul_matrix(&self, a: &FdElem) -> Matrix<FdElem> {
        let d = self.dim();
        let rows = (0..d).map(|i| self.mul(a, &self.basis_elem(i)).into_iter().map(|x| vec![x]).collect()).collect();
        Matrix::from_rows(d, rows)
    }

    fn right_mul_matrix(&self, a: &FdElem) -> Matrix<FdElem> {
        let d = self.dim();
        let rows = (0..d).map(|i| self.mul(&self.basis_elem(i), a).into_iter().map(|x| vec![x]).collect()).collect();
        Matrix::from_rows(d, rows)
    }

    fn format_elem(&self, a: &FdElem) -> String {
        self.inner.alg.format(a)
    }

    fn parse_elem(&self, s: &str) -> Result<FdElem> {
        self.inner.alg.parse(s)
    }

    fn has_injectives(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn quiver(p: u64, vertices: &[&str], arrows: &[(&str, &str, &str)], relations: &[&str]) -> QuiverSpec {
        QuiverSpec {
            p,
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(n, f, t)| ArrowSpec { name: n.to_string(), from: f.to_string(), to: t.to_string() })
                .collect(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
            nilpotency_bound: None,
        }
    }

    #[test]
    fn a2_has_three_path_classes() {
        let alg = BoundQuiverAlgebra::build(&AlgebraSpec::Quiver(quiver(2, &["1", "2"], &[("a", "1", "2")], &[]))).unwrap();
        assert_eq!(alg.dim(), 3);
        let mut names = alg.basis_names().to_vec();
        names.sort();
        assert_eq!(names, vec!["a", "e1", "e2"]);
        assert!(alg.check_associative());
        assert!(alg.check_idempotents());
        assert!(alg.check_radical());
    }

    #[test]
    fn truncated_polynomial_rings() {
        let a = BoundQuiverAlgebra::build(&AlgebraSpec::Quiver(quiver(2, &["1"], &[("x", "1", "1")], &["x*x"]))).unwrap();
        assert_eq!(a.dim(), 2);
        let b = BoundQuiverAlgebra::build(&AlgebraSpec::Quiver(quiver(3, &["1"], &[("x", "1", "1")], &["x*x*x"]))).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.basis_names(), &["e1", "x", "x*x"]);
    }

    #[test]
    fn cycle_without_relations_is_not_admissible() {
        let err = BoundQuiverAlgebra::build(&AlgebraSpec::Quiver(quiver(2, &["1"], &[("x", "1", "1")], &[])));
        assert!(matches!(err, Err(HalgError::NotAdmissible(_))));
    }

    #[test]
    fn mixed_relation_is_rejected() {
        let spec = quiver(2, &["1", "2"], &[("a", "1", "2"), ("b", "2", "1")], &["b*a + a*b"]);
        assert!(matches!(BoundQuiverAlgebra::build(&AlgebraSpec::Quiver(spec)), Err(HalgError::BadRelation(_))));
        let spec = quiver(2, &["1"], &[("x", "1", "1")], &["x"]);
        assert!(matches!(BoundQuiverAlgebra::build(&AlgebraSpec::Quiver(spec)), Err(HalgError::BadRelation(_))));
    }

    #[test]
    fn composition_order_is_function_style() {
        // 1 -a-> 2 -b-> 3: b*a is a path, a*b is zero.
        let spec = quiver(2, &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &[]);
        let r = FdRing::from_quiver(&spec).unwrap();
        let ba = r.parse_elem("b*a").unwrap();
        assert!(!r.is_zero(&ba));
        assert!(r.is_zero(&r.parse_elem("a*b").unwrap()));
        let a = r.parse_elem("a").unwrap();
        let b = r.parse_elem("b").unwrap();
        assert_eq!(r.mul(&b, &a), ba);
        assert_eq!(r.format_elem(&ba), "b*a");
        // In the opposite ring the product order flips.
        let op = r.opposite();
        assert_eq!(op.mul(&a, &b), ba);
        assert_eq!(r.mul(&r.parse_elem("e2").unwrap(), &a), a);
    }

    #[test]
    fn opposite_algebra_reverses_arrows() {
        let alg = BoundQuiverAlgebra::build(&AlgebraSpec::Quiver(quiver(2, &["1", "2"], &[("a", "1", "2")], &[]))).unwrap();
        let op = alg.opposite();
        assert_eq!(op.dim(), 3);
        match op.spec() {
            AlgebraSpec::Quiver(q) => assert_eq!((q.arrows[0].from.as_str(), q.arrows[0].to.as_str()), ("2", "1")),
            _ => unreachable!(),
        }
        assert!(op.opposite().same_structure(&alg));
        assert!(op.check_associative());
    }

    #[test]
    fn annihilator_kernel_over_dual_numbers() {
        let r = FdRing::from_quiver(&quiver(2, &["1"], &[("x", "1", "1")], &["x*x"])).unwrap();
        let x = r.parse_elem("x").unwrap();
        let k = r.kernel_gens(&Matrix::from_rows(1, vec![vec![x.clone()]]));
        assert_eq!(k.rows(), 1);
        assert_eq!(k.get(0, 0), &x);
    }

    #[test]
    fn expression_parsing() {
        let r = FdRing::from_quiver(&quiver(3, &["1"], &[("x", "1", "1")], &["x*x*x"])).unwrap();
        let e = r.parse_elem("2*x + 1 - x*x").unwrap();
        assert_eq!(r.format_elem(&e), "e1 + 2*x + 2*x*x");
        assert!(r.parse_elem("x +").is_err());
        assert!(r.parse_elem("y").is_err());
        assert_eq!(r.parse_elem("x*x*x").unwrap(), r.zero());
    }

    #[test]
    fn structure_constants_loader() {
        // F_2[x]/(x^2) with basis {1, x}.
        let spec = StructureConstantsSpec {
            p: 2,
            dim: 2,
            table: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]],
            idempotents: vec![0],
            radical: vec![1],
            trusted_radical: true,
        };
        let r = FdRing::build(&AlgebraSpec::StructureConstants(spec.clone())).unwrap();
        assert_eq!(r.dim(), 2);
        let untrusted = StructureConstantsSpec { trusted_radical: false, ..spec.clone() };
        assert!(FdRing::build(&AlgebraSpec::StructureConstants(untrusted)).is_err());
        let bad = StructureConstantsSpec { radical: vec![], idempotents: vec![0, 1], ..spec };
        assert!(FdRing::build(&AlgebraSpec::StructureConstants(bad)).is_err());
    }

    #[test]
    fn reverse_expression_flips_monomials() {
        assert_eq!(reverse_expression("b*a"), "a*b");
        assert_eq!(reverse_expression("c*b*a - 2*d*e"), "a*b*c - 2*e*d");
    }
}
