//! JSON encodings of rings, modules, maps and certificates.
//!
//! Entries are element expressions in the notation of the base ring; a
//! module's `side` selects the acting ring (the base ring or its opposite).

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::constructions::{
    ApproxCertificate, ApproxChecks, ChainCertificate, ChainChecks, EgCertificate, EgChecks, ExtTransport, StableHomCheck,
    TheoremCertificate, TheoremChecks,
};
use crate::error::{HalgError, Result};
use crate::fdalgebra::{AlgebraSpec, ArrowSpec, FdRing, QuiverSpec, StructureConstantsSpec};
use crate::gorenstein::{GorensteinChecks, GorensteinReport, InjectiveChecks, InjectiveResolution, INDEXING_NOTE};
use crate::homology::{ExtModule, Lemma21, Lemma21Checks, Resolution};
use crate::integers::Integers;
use crate::module::{FPModule, ModuleMap};
use crate::ring::{CanonicalDecomposition, Matrix, ModuleInvariant, Ring, Side};

fn bad(msg: impl Into<String>) -> HalgError {
    HalgError::Parse(msg.into())
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

pub fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("field {key:?} is not a non-negative integer")))
}

pub fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| bad(format!("field {key:?} is not a string")))
}

pub fn array_field<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| bad(format!("field {key:?} is not an array")))
}

fn bool_field(v: &Value, key: &str) -> Result<bool> {
    field(v, key)?.as_bool().ok_or_else(|| bad(format!("field {key:?} is not a boolean")))
}

fn strings(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} is not an array")))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad(format!("{what} must contain strings"))))
        .collect()
}

fn usizes(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} is not an array")))?
        .iter()
        .map(|s| s.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("{what} must contain non-negative integers"))))
        .collect()
}

/// Serialization with sorted keys and no insignificant whitespace.
pub fn canonical_string(v: &Value) -> String {
    // serde_json's default map is ordered by key.
    serde_json::to_string(v).expect("JSON values serialize")
}

pub fn side_from_str(s: &str) -> Result<Side> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(bad(format!("side must be \"left\" or \"right\", got {other:?}"))),
    }
}

/// Rings that can describe themselves in the ring-file format.
pub trait RingJson: Ring {
    /// The base ring (unflipped) as a ring file.
    fn ring_json(&self) -> Value;
    /// The base ring of this acting ring.
    fn base_ring(&self) -> Self;
}

impl RingJson for Integers {
    fn ring_json(&self) -> Value {
        json!({"type": "integers"})
    }

    fn base_ring(&self) -> Self {
        Integers
    }
}

impl RingJson for FdRing {
    fn ring_json(&self) -> Value {
        match self.base_algebra().spec() {
            AlgebraSpec::Quiver(q) => {
                let mut v = json!({
                    "type": "bound_quiver",
                    "p": q.p,
                    "vertices": q.vertices,
                    "arrows": q.arrows.iter().map(|a| json!({"name": a.name, "from": a.from, "to": a.to})).collect::<Vec<_>>(),
                    "relations": q.relations,
                });
                if let Some(b) = q.nilpotency_bound {
                    v["nilpotency_bound"] = json!(b);
                }
                v
            }
            AlgebraSpec::StructureConstants(s) => json!({
                "type": "structure_constants",
                "p": s.p,
                "dim": s.dim,
                "table": s.table,
                "idempotents": s.idempotents,
                "radical": s.radical,
                "trusted_radical": s.trusted_radical,
            }),
        }
    }

    fn base_ring(&self) -> Self {
        if self.is_flipped() {
            self.opposite()
        } else {
            self.clone()
        }
    }
}

/// A parsed ring file.
#[derive(Clone, Debug)]
pub enum AnyRing {
    Integers(Integers),
    Fd(FdRing),
}

impl AnyRing {
    pub fn to_json(&self) -> Value {
        match self {
            AnyRing::Integers(r) => r.ring_json(),
            AnyRing::Fd(r) => r.ring_json(),
        }
    }
}

pub fn ring_from_json(v: &Value) -> Result<AnyRing> {
    match str_field(v, "type")? {
        "integers" => Ok(AnyRing::Integers(Integers)),
        "bound_quiver" => {
            let p = field(v, "p")?.as_u64().ok_or_else(|| bad("field \"p\" is not a positive integer"))?;
            let arrows = array_field(v, "arrows")?
                .iter()
                .map(|a| Ok(ArrowSpec { name: str_field(a, "name")?.into(), from: str_field(a, "from")?.into(), to: str_field(a, "to")?.into() }))
                .collect::<Result<Vec<_>>>()?;
            let relations = match v.get("relations") {
                Some(r) => strings(r, "relations")?,
                None => Vec::new(),
            };
            let nilpotency_bound = match v.get("nilpotency_bound") {
                None | Some(Value::Null) => None,
                Some(b) => Some(b.as_u64().ok_or_else(|| bad("nilpotency_bound is not an integer"))? as usize),
            };
            let spec = QuiverSpec { p, vertices: strings(field(v, "vertices")?, "vertices")?, arrows, relations, nilpotency_bound };
            Ok(AnyRing::Fd(FdRing::from_quiver(&spec)?))
        }
        "structure_constants" => {
            let table = field(v, "table")?
                .as_array()
                .ok_or_else(|| bad("table is not an array"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("table rows must be arrays"))?
                        .iter()
                        .map(|c| {
                            c.as_array()
                                .ok_or_else(|| bad("table entries must be coordinate arrays"))?
                                .iter()
                                .map(|x| x.as_i64().ok_or_else(|| bad("coordinates must be integers")))
                                .collect::<Result<Vec<i64>>>()
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let spec = StructureConstantsSpec {
                p: field(v, "p")?.as_u64().ok_or_else(|| bad("field \"p\" is not a positive integer"))?,
                dim: usize_field(v, "dim")?,
                table,
                idempotents: usizes(field(v, "idempotents")?, "idempotents")?,
                radical: usizes(field(v, "radical")?, "radical")?,
                trusted_radical: v.get("trusted_radical").and_then(Value::as_bool).unwrap_or(false),
            };
            Ok(AnyRing::Fd(FdRing::build(&AlgebraSpec::StructureConstants(spec))?))
        }
        other => Err(bad(format!("unknown ring type {other:?}"))),
    }
}

/// A module over either backend.
#[derive(Clone, Debug)]
pub enum AnyModule {
    Integers(FPModule<Integers>),
    Fd(FPModule<FdRing>),
}

/// The ring acting on modules on `side` over the base ring `base`.
pub fn acting<R: Ring>(base: &R, side: Side) -> R {
    match side {
        Side::Left => base.clone(),
        Side::Right => base.opposite(),
    }
}

/// A module file body (`side`, `generators`, `relations`) over `base`.
pub fn module_from_json_over<R: Ring>(base: &R, v: &Value) -> Result<FPModule<R>> {
    let side = match v.get("side") {
        Some(s) => side_from_str(s.as_str().ok_or_else(|| bad("side is not a string"))?)?,
        None => Side::Left,
    };
    let r = acting(base, side);
    let g = usize_field(v, "generators")?;
    let rel = match v.get("relations") {
        Some(rows) => matrix_from_json(&r, rows, g)?,
        None => r.zeros(0, g),
    };
    Ok(FPModule::new(r, side, g, rel))
}

/// A module file; the ring is given inline.
pub fn module_from_json(v: &Value) -> Result<AnyModule> {
    let ring = ring_from_json(field(v, "ring")?)?;
    module_from_json_with(&ring, v)
}

pub fn module_from_json_with(ring: &AnyRing, v: &Value) -> Result<AnyModule> {
    Ok(match ring {
        AnyRing::Integers(r) => AnyModule::Integers(module_from_json_over(r, v)?),
        AnyRing::Fd(r) => AnyModule::Fd(module_from_json_over(r, v)?),
    })
}

pub fn elem_from_json<R: Ring>(r: &R, v: &Value) -> Result<R::Elem> {
    match v {
        Value::String(s) => r.parse_elem(s),
        Value::Number(n) => r.parse_elem(&n.to_string()),
        _ => Err(bad("matrix entries must be element expressions")),
    }
}

pub fn matrix_to_json<R: Ring>(r: &R, m: &Matrix<R::Elem>) -> Value {
    Value::Array(m.row_iter().map(|row| Value::Array(row.iter().map(|x| Value::String(r.format_elem(x))).collect())).collect())
}

pub fn matrix_from_json<R: Ring>(r: &R, v: &Value, cols: usize) -> Result<Matrix<R::Elem>> {
    let rows = v.as_array().ok_or_else(|| bad("matrix is not an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("matrix row is not an array"))?;
        if row.len() != cols {
            return Err(bad(format!("matrix row has {} entries, expected {cols}", row.len())));
        }
        out.push(row.iter().map(|x| elem_from_json(r, x)).collect::<Result<Vec<_>>>()?);
    }
    Ok(Matrix::from_rows(cols, out))
}

fn elems_to_json<R: Ring>(r: &R, xs: &[R::Elem]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(r.format_elem(x))).collect())
}

fn elems_from_json<R: Ring>(r: &R, v: &Value) -> Result<Vec<R::Elem>> {
    v.as_array().ok_or_else(|| bad("expected an array of elements"))?.iter().map(|x| elem_from_json(r, x)).collect()
}

/// Module body without the ring.
pub fn module_to_json<R: Ring>(m: &FPModule<R>) -> Value {
    json!({
        "side": m.side().as_str(),
        "generators": m.n_gens(),
        "relations": matrix_to_json(m.ring(), m.relations()),
    })
}

/// Module file with the base ring inline.
pub fn module_file<R: RingJson>(m: &FPModule<R>) -> Value {
    let mut v = module_to_json(m);
    v["ring"] = m.ring().ring_json();
    v
}

pub fn map_to_json<R: Ring>(f: &ModuleMap<R>) -> Value {
    json!({
        "source": module_to_json(f.source()),
        "target": module_to_json(f.target()),
        "matrix": matrix_to_json(f.ring(), f.matrix()),
    })
}

pub fn map_from_json<R: Ring>(base: &R, v: &Value) -> Result<ModuleMap<R>> {
    let source = module_from_json_over(base, field(v, "source")?)?;
    let target = module_from_json_over(base, field(v, "target")?)?;
    if source.side() != target.side() {
        return Err(bad("map between modules on different sides"));
    }
    let m = matrix_from_json(source.ring(), field(v, "matrix")?, target.n_gens())?;
    if m.rows() != source.n_gens() {
        return Err(bad("map matrix has the wrong number of rows"));
    }
    Ok(ModuleMap::new_unchecked(source, target, m))
}

fn modules_from<R: Ring>(base: &R, v: &Value) -> Result<Vec<FPModule<R>>> {
    v.as_array().ok_or_else(|| bad("expected an array of modules"))?.iter().map(|m| module_from_json_over(base, m)).collect()
}

fn maps_from<R: Ring>(base: &R, v: &Value) -> Result<Vec<ModuleMap<R>>> {
    v.as_array().ok_or_else(|| bad("expected an array of maps"))?.iter().map(|m| map_from_json(base, m)).collect()
}

pub fn resolution_to_json<R: Ring>(res: &Resolution<R>) -> Value {
    let r = res.ring();
    json!({
        "module": module_to_json(&res.module),
        "augmentation": matrix_to_json(r, &res.augmentation),
        "maps": res.maps.iter().map(|m| matrix_to_json(r, m)).collect::<Vec<_>>(),
        "idempotents": (0..=res.maps.len()).map(|i| elems_to_json(r, &res.term_idempotents(i))).collect::<Vec<_>>(),
        "minimal": res.minimal,
    })
}

pub fn resolution_from_json<R: Ring>(base: &R, v: &Value) -> Result<Resolution<R>> {
    let module = module_from_json_over(base, field(v, "module")?)?;
    let r = module.ring().clone();
    let augmentation = matrix_from_json(&r, field(v, "augmentation")?, module.n_gens())?;
    let mut maps = Vec::new();
    let mut cols = augmentation.rows();
    for m in array_field(v, "maps")? {
        let m = matrix_from_json(&r, m, cols)?;
        cols = m.rows();
        maps.push(m);
    }
    let idempotents = array_field(v, "idempotents")?.iter().map(|e| elems_from_json(&r, e)).collect::<Result<Vec<_>>>()?;
    if idempotents.len() != maps.len() + 1 {
        return Err(bad("one idempotent list per term is required"));
    }
    let minimal = bool_field(v, "minimal")?;
    let res = Resolution { module, augmentation, maps, idempotents, minimal };
    if (0..=res.maps.len()).any(|i| res.idempotents[i].len() != res.rank(i)) {
        return Err(bad("idempotent list length differs from the term rank"));
    }
    Ok(res)
}

pub fn ext_to_json<R: Ring>(e: &ExtModule<R>) -> Value {
    let r = e.raw.ring();
    json!({
        "index": e.index,
        "raw": module_to_json(&e.raw),
        "rank": e.cycles.cols(),
        "cycles": matrix_to_json(r, &e.cycles),
        "boundaries": matrix_to_json(r, &e.boundaries),
    })
}

pub fn ext_from_json<R: Ring>(base: &R, v: &Value) -> Result<ExtModule<R>> {
    let raw = module_from_json_over(base, field(v, "raw")?)?;
    let n = usize_field(v, "rank")?;
    let r = raw.ring().clone();
    Ok(ExtModule {
        index: usize_field(v, "index")?,
        cycles: matrix_from_json(&r, field(v, "cycles")?, n)?,
        boundaries: matrix_from_json(&r, field(v, "boundaries")?, n)?,
        raw,
    })
}

pub fn invariant_to_json(i: &ModuleInvariant) -> Value {
    match i {
        ModuleInvariant::Abelian(c) => json!({
            "free_rank": c.free_rank,
            "factors": c.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "display": c.to_string(),
        }),
        ModuleInvariant::Fd { dimension_vector, top } => json!({
            "dimension_vector": dimension_vector,
            "top": top,
        }),
    }
}

pub fn invariant_from_json(v: &Value) -> Result<ModuleInvariant> {
    if v.get("free_rank").is_some() {
        let factors = strings(field(v, "factors")?, "factors")?
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| bad(format!("invariant factor {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleInvariant::Abelian(CanonicalDecomposition { free_rank: usize_field(v, "free_rank")?, factors }))
    } else {
        Ok(ModuleInvariant::Fd {
            dimension_vector: usizes(field(v, "dimension_vector")?, "dimension_vector")?,
            top: usizes(field(v, "top")?, "top")?,
        })
    }
}

fn checks(pairs: &[(&str, bool)]) -> Value {
    let mut m = Map::new();
    for (k, b) in pairs {
        m.insert((*k).to_string(), Value::Bool(*b));
    }
    Value::Object(m)
}

pub fn theorem_checks_json(c: &TheoremChecks) -> Value {
    checks(&[
        ("exact", c.exact),
        ("dual_exact", c.dual_exact),
        ("c_syzygy", c.c_syzygy),
        ("b_dual_pd", c.b_dual_pd),
        ("grade", c.grade),
        ("b_syzygy", c.b_syzygy),
    ])
}

pub fn chain_checks_json(c: &ChainChecks) -> Value {
    checks(&[
        ("steps", c.steps),
        ("epis_dual_exact", c.epis_dual_exact),
        ("syzygy_levels", c.syzygy_levels),
        ("b_dual_pd", c.b_dual_pd),
        ("ext_transport", c.ext_transport),
    ])
}

pub fn approx_checks_json(c: &ApproxChecks) -> Value {
    checks(&[
        ("exact", c.exact),
        ("dual_exact", c.dual_exact),
        ("y_pd", c.y_pd),
        ("middle", c.middle),
        ("ext_isos", c.ext_isos),
        ("stable_hom", c.stable_hom),
    ])
}

pub fn eg_checks_json(c: &EgChecks) -> Value {
    checks(&[("exact", c.exact), ("top_exact", c.top_exact), ("s_syzygy", c.s_syzygy), ("theorem", c.theorem)])
}

pub fn lemma21_checks_json(c: &Lemma21Checks) -> Value {
    checks(&[
        ("injective", c.injective),
        ("exact_at_module", c.exact_at_module),
        ("exact_at_double_dual", c.exact_at_double_dual),
        ("surjective", c.surjective),
        ("ext_agree", c.ext_agree),
    ])
}

pub fn injective_checks_json(c: &InjectiveChecks) -> Value {
    checks(&[("injective_terms", c.injective_terms), ("exact", c.exact), ("essential", c.essential)])
}

pub fn gorenstein_checks_json(c: &GorensteinChecks) -> Value {
    checks(&[
        ("resolution", c.resolution),
        ("fd_rederived", c.fd_rederived),
        ("verdicts", c.verdicts),
        ("implication", c.implication),
        ("duality", c.duality),
    ])
}

pub fn theorem_to_json<R: Ring>(c: &TheoremCertificate<R>) -> Value {
    json!({
        "module": module_to_json(&c.module),
        "d": c.d,
        "cap": c.cap,
        "projective": module_to_json(&c.projective),
        "middle": module_to_json(&c.middle),
        "b": module_to_json(&c.b),
        "c": module_to_json(&c.c),
        "alpha": map_to_json(&c.alpha),
        "beta": map_to_json(&c.beta),
        "ext_module": module_to_json(&c.ext_module),
        "ext_resolution": resolution_to_json(&c.ext_resolution),
        "checks": theorem_checks_json(&c.checks),
    })
}

fn no_theorem_checks() -> TheoremChecks {
    TheoremChecks { exact: false, dual_exact: false, c_syzygy: false, b_dual_pd: false, grade: false, b_syzygy: false }
}

/// Decoded certificates carry all-false checks until re-verified.
pub fn theorem_from_json<R: Ring>(base: &R, v: &Value) -> Result<TheoremCertificate<R>> {
    Ok(TheoremCertificate {
        module: module_from_json_over(base, field(v, "module")?)?,
        d: usize_field(v, "d")?,
        cap: usize_field(v, "cap")?,
        projective: module_from_json_over(base, field(v, "projective")?)?,
        middle: module_from_json_over(base, field(v, "middle")?)?,
        b: module_from_json_over(base, field(v, "b")?)?,
        c: module_from_json_over(base, field(v, "c")?)?,
        alpha: map_from_json(base, field(v, "alpha")?)?,
        beta: map_from_json(base, field(v, "beta")?)?,
        ext_module: module_from_json_over(base, field(v, "ext_module")?)?,
        ext_resolution: resolution_from_json(base, field(v, "ext_resolution")?)?,
        checks: no_theorem_checks(),
    })
}

fn transport_to_json(t: &ExtTransport) -> Value {
    json!({
        "d": t.d,
        "k": invariant_to_json(&t.k),
        "ext_transpose": invariant_to_json(&t.ext_transpose),
        "ext_dual": t.ext_dual.as_ref().map(invariant_to_json),
    })
}

fn transport_from_json(v: &Value) -> Result<ExtTransport> {
    Ok(ExtTransport {
        d: usize_field(v, "d")?,
        k: invariant_from_json(field(v, "k")?)?,
        ext_transpose: invariant_from_json(field(v, "ext_transpose")?)?,
        ext_dual: match v.get("ext_dual") {
            None | Some(Value::Null) => None,
            Some(e) => Some(invariant_from_json(e)?),
        },
    })
}

pub fn chain_to_json<R: Ring>(c: &ChainCertificate<R>) -> Value {
    json!({
        "module": module_to_json(&c.module),
        "k": c.k,
        "cap": c.cap,
        "projective": module_to_json(&c.projective),
        "terms": c.terms.iter().map(module_to_json).collect::<Vec<_>>(),
        "epis": c.epis.iter().map(map_to_json).collect::<Vec<_>>(),
        "kernels": c.kernels.iter().map(map_to_json).collect::<Vec<_>>(),
        "steps": c.steps.iter().map(theorem_to_json).collect::<Vec<_>>(),
        "transport": c.transport.iter().map(transport_to_json).collect::<Vec<_>>(),
        "checks": chain_checks_json(&c.checks),
    })
}

pub fn chain_from_json<R: Ring>(base: &R, v: &Value) -> Result<ChainCertificate<R>> {
    Ok(ChainCertificate {
        module: module_from_json_over(base, field(v, "module")?)?,
        k: usize_field(v, "k")?,
        cap: usize_field(v, "cap")?,
        projective: module_from_json_over(base, field(v, "projective")?)?,
        terms: modules_from(base, field(v, "terms")?)?,
        epis: maps_from(base, field(v, "epis")?)?,
        kernels: maps_from(base, field(v, "kernels")?)?,
        steps: array_field(v, "steps")?.iter().map(|s| theorem_from_json(base, s)).collect::<Result<Vec<_>>>()?,
        transport: array_field(v, "transport")?.iter().map(transport_from_json).collect::<Result<Vec<_>>>()?,
        checks: ChainChecks { steps: false, epis_dual_exact: false, syzygy_levels: false, b_dual_pd: false, ext_transport: false },
    })
}

pub fn approx_to_json<R: Ring>(c: &ApproxCertificate<R>) -> Value {
    json!({
        "module": module_to_json(&c.module),
        "k": c.k,
        "cap": c.cap,
        "chain": chain_to_json(&c.chain),
        "double_dual": module_to_json(&c.double_dual),
        "x": module_to_json(&c.x),
        "middle": module_to_json(&c.middle),
        "y": module_to_json(&c.y),
        "f": map_to_json(&c.f),
        "g": map_to_json(&c.g),
        "tests": c.tests.iter().map(module_to_json).collect::<Vec<_>>(),
        "stable": c.stable.iter().map(|s| json!({"test": s.test, "iso": s.iso})).collect::<Vec<_>>(),
        "checks": approx_checks_json(&c.checks),
    })
}

pub fn approx_from_json<R: Ring>(base: &R, v: &Value) -> Result<ApproxCertificate<R>> {
    let stable = array_field(v, "stable")?
        .iter()
        .map(|s| {
            Ok(StableHomCheck {
                test: usize_field(s, "test")?,
                iso: match s.get("iso") {
                    None | Some(Value::Null) => None,
                    Some(b) => Some(b.as_bool().ok_or_else(|| bad("iso must be a boolean or null"))?),
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproxCertificate {
        module: module_from_json_over(base, field(v, "module")?)?,
        k: usize_field(v, "k")?,
        cap: usize_field(v, "cap")?,
        chain: chain_from_json(base, field(v, "chain")?)?,
        double_dual: module_from_json_over(base, field(v, "double_dual")?)?,
        x: module_from_json_over(base, field(v, "x")?)?,
        middle: module_from_json_over(base, field(v, "middle")?)?,
        y: module_from_json_over(base, field(v, "y")?)?,
        f: map_from_json(base, field(v, "f")?)?,
        g: map_from_json(base, field(v, "g")?)?,
        tests: modules_from(base, field(v, "tests")?)?,
        stable,
        checks: ApproxChecks { exact: false, dual_exact: false, y_pd: false, middle: false, ext_isos: false, stable_hom: false },
    })
}

pub fn eg_to_json<R: Ring>(c: &EgCertificate<R>) -> Value {
    json!({
        "theorem": theorem_to_json(&c.theorem),
        "q": module_to_json(&c.q),
        "delta": map_to_json(&c.delta),
        "s": module_to_json(&c.s),
        "s_incl": map_to_json(&c.s_incl),
        "cover": map_to_json(&c.cover),
        "top_in": map_to_json(&c.top_in),
        "top_out": map_to_json(&c.top_out),
        "s_level": c.s_level,
        "checks": eg_checks_json(&c.checks),
    })
}

pub fn eg_from_json<R: Ring>(base: &R, v: &Value) -> Result<EgCertificate<R>> {
    Ok(EgCertificate {
        theorem: theorem_from_json(base, field(v, "theorem")?)?,
        q: module_from_json_over(base, field(v, "q")?)?,
        delta: map_from_json(base, field(v, "delta")?)?,
        s: module_from_json_over(base, field(v, "s")?)?,
        s_incl: map_from_json(base, field(v, "s_incl")?)?,
        cover: map_from_json(base, field(v, "cover")?)?,
        top_in: map_from_json(base, field(v, "top_in")?)?,
        top_out: map_from_json(base, field(v, "top_out")?)?,
        s_level: usize_field(v, "s_level")?,
        checks: EgChecks { exact: false, top_exact: false, s_syzygy: false, theorem: false },
    })
}

pub fn lemma21_to_json<R: Ring>(l: &Lemma21<R>) -> Value {
    json!({
        "module": module_to_json(&l.module),
        "ext1": module_to_json(&l.ext1),
        "double_dual": module_to_json(&l.double_dual),
        "ext2": module_to_json(&l.ext2),
        "incl": map_to_json(&l.incl),
        "sigma": map_to_json(&l.sigma),
        "proj": map_to_json(&l.proj),
    })
}

pub fn lemma21_from_json<R: Ring>(base: &R, v: &Value) -> Result<Lemma21<R>> {
    Ok(Lemma21 {
        module: module_from_json_over(base, field(v, "module")?)?,
        ext1: module_from_json_over(base, field(v, "ext1")?)?,
        double_dual: module_from_json_over(base, field(v, "double_dual")?)?,
        ext2: module_from_json_over(base, field(v, "ext2")?)?,
        incl: map_from_json(base, field(v, "incl")?)?,
        sigma: map_from_json(base, field(v, "sigma")?)?,
        proj: map_from_json(base, field(v, "proj")?)?,
    })
}

pub fn injective_resolution_to_json(res: &InjectiveResolution) -> Value {
    json!({
        "regular": module_to_json(&res.regular),
        "terms": res.terms.iter().map(module_to_json).collect::<Vec<_>>(),
        "monos": res.monos.iter().map(map_to_json).collect::<Vec<_>>(),
        "cosyzygies": res.cosyzygies.iter().map(module_to_json).collect::<Vec<_>>(),
        "projections": res.projections.iter().map(map_to_json).collect::<Vec<_>>(),
        "essential": res.essential,
    })
}

pub fn injective_resolution_from_json(base: &FdRing, v: &Value) -> Result<InjectiveResolution> {
    let essential = array_field(v, "essential")?
        .iter()
        .map(|b| b.as_bool().ok_or_else(|| bad("essential flags must be booleans")))
        .collect::<Result<Vec<_>>>()?;
    let res = InjectiveResolution {
        regular: module_from_json_over(base, field(v, "regular")?)?,
        terms: modules_from(base, field(v, "terms")?)?,
        monos: maps_from(base, field(v, "monos")?)?,
        cosyzygies: modules_from(base, field(v, "cosyzygies")?)?,
        projections: maps_from(base, field(v, "projections")?)?,
        essential,
    };
    let k = res.terms.len();
    if res.monos.len() != k || res.projections.len() != k || res.essential.len() != k || res.cosyzygies.len() != k + 1 {
        return Err(bad("injective resolution lists have inconsistent lengths"));
    }
    Ok(res)
}

pub fn gorenstein_to_json(rep: &GorensteinReport) -> Value {
    json!({
        "ring": rep.ring.ring_json(),
        "k": rep.k,
        "cap": rep.cap,
        "resolution": injective_resolution_to_json(&rep.resolution),
        "fd": rep.fd,
        "quasi_k_gorenstein": rep.quasi_k_gorenstein,
        "k_gorenstein": rep.k_gorenstein,
        "indexing": rep.indexing,
    })
}

pub fn gorenstein_from_json(v: &Value) -> Result<GorensteinReport> {
    let ring = match ring_from_json(field(v, "ring")?)? {
        AnyRing::Fd(r) => r,
        AnyRing::Integers(_) => return Err(bad("classification reports need a finite-dimensional algebra")),
    };
    let fd = array_field(v, "fd")?
        .iter()
        .map(|x| match x {
            Value::Null => Ok(None),
            x => x.as_u64().map(|f| Some(f as usize)).ok_or_else(|| bad("fd entries must be integers or null")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GorensteinReport {
        resolution: injective_resolution_from_json(&ring, field(v, "resolution")?)?,
        ring,
        k: usize_field(v, "k")?,
        cap: usize_field(v, "cap")?,
        fd,
        quasi_k_gorenstein: bool_field(v, "quasi_k_gorenstein")?,
        k_gorenstein: bool_field(v, "k_gorenstein")?,
        indexing: INDEXING_NOTE,
    })
}
