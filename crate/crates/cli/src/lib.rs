//! The `halg` command line: parses ring and module files, runs one
//! operation and prints a canonical JSON report with its certificate.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use halg::constructions::{approximation, evans_griffith, spherical_chain, theorem_sequence, DEFAULT_CAP};
use halg::fixtures::{fd_corpus, integer_corpus};
use halg::gorenstein::{classify, classify_ring, grade_spotcheck, Violation};
use halg::homology::{
    dual_module, ext_from, grade, lemma21_sequence, resolution, resolve_presentation, torsionfree_level, transpose_from, Capped,
    ExtModule, Resolution,
};
use halg::io::*;
use halg::module::FPModule;
use halg::{opposite_transfer, HalgError, Integers, Ring, Side};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_PRECONDITION: u8 = 2;
pub const EXIT_MALFORMED: u8 = 3;
pub const EXIT_UNAVAILABLE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "halg", version, about = "Exact homological algebra with checked certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Projective resolution with `steps` maps.
    Resolve {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = 3)]
        steps: usize,
    },
    /// `Ext^i(M, R)`.
    Ext {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        i: usize,
    },
    /// The transpose.
    Transpose {
        #[arg(long)]
        module: PathBuf,
    },
    /// `M* = Hom(M, R)`.
    Dual {
        #[arg(long)]
        module: PathBuf,
    },
    /// Least `j` with `Ext^j(M, R) != 0`.
    Grade {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Torsionfree level.
    TfLevel {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// `0 -> Ext^1(D M) -> M -> M** -> Ext^2(D M) -> 0`.
    Lemma21 {
        #[arg(long)]
        module: PathBuf,
    },
    /// `0 -> B -> M ⊕ P -> C -> 0`.
    Theorem {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Chain of epimorphisms of length `k`.
    Chain {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Approximation sequence for `T`.
    Approx {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long = "test-h")]
        test_h: Vec<PathBuf>,
    },
    /// Evans-Griffith representation.
    Eg {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Flat dimensions of the minimal injective resolution of the ring.
    Classify {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Grade-condition checks on sample modules.
    Spotcheck {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        sample: Vec<PathBuf>,
    },
    /// Re-check an emitted certificate.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

/// Exit code and output streams of one invocation.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Halg(HalgError),
}

impl From<HalgError> for Failure {
    fn from(e: HalgError) -> Self {
        Failure::Halg(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_MALFORMED,
            Failure::Halg(e) => match e {
                HalgError::PreconditionFailed { .. } => EXIT_PRECONDITION,
                HalgError::CapabilityUnavailable(_) | HalgError::Inconclusive(_) => EXIT_UNAVAILABLE,
                HalgError::Parse(_)
                | HalgError::InvalidArgument(_)
                | HalgError::KTooSmall(_)
                | HalgError::MixedRings
                | HalgError::NotAdmissible(_)
                | HalgError::BadRelation(_)
                | HalgError::NotWellDefined(_) => EXIT_MALFORMED,
                HalgError::LiftFailed(_) | HalgError::NotContained => EXIT_CHECK_FAILED,
            },
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Input(msg) => json!({"kind": "malformed_input", "message": msg}),
            Failure::Halg(HalgError::PreconditionFailed { condition, index, step, message }) => json!({
                "kind": "precondition_failed",
                "condition": condition.to_string(),
                "index": index,
                "step": step,
                "message": message,
            }),
            Failure::Halg(e @ (HalgError::CapabilityUnavailable(_) | HalgError::Inconclusive(_))) => {
                json!({"kind": "unavailable", "message": e.to_string()})
            }
            Failure::Halg(e) => {
                let kind = if self.code() == EXIT_MALFORMED { "malformed_input" } else { "failed" };
                json!({"kind": kind, "message": e.to_string()})
            }
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => format!("malformed input: {m}"),
            Failure::Halg(HalgError::PreconditionFailed { condition, index, step, message }) => match step {
                Some(s) => format!("precondition {condition} failed at Ext index {index} (step {s}): {message}"),
                None => format!("precondition {condition} failed at Ext index {index}: {message}"),
            },
            Failure::Halg(e) => e.to_string(),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Result summary, certificate (with its `kind`, `ring` and `checks`) and checks.
struct Payload {
    result: Value,
    certificate: Value,
    checks: Value,
}

fn all_true(v: &Value) -> bool {
    match v {
        Value::Bool(b) => *b,
        Value::Object(m) => m.values().all(all_true),
        Value::Array(a) => a.iter().all(all_true),
        _ => true,
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Digest of the canonical report without its timing and digest fields.
pub fn report_digest(report: &Value) -> String {
    let mut v = report.clone();
    if let Some(m) = v.as_object_mut() {
        m.remove("timing_ms");
        m.remove("digest");
    }
    sha256_hex(canonical_string(&v).as_bytes())
}

fn read_json(path: &Path) -> CmdResult<(Value, String)> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let v = serde_json::from_slice(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((v, sha256_hex(&bytes)))
}

struct Inputs(Map<String, Value>);

impl Inputs {
    fn new() -> Self {
        Inputs(Map::new())
    }

    fn add(&mut self, role: &str, path: &Path, digest: &str) {
        self.0.insert(role.to_string(), json!({"path": path.display().to_string(), "sha256": digest}));
    }
}

/// Ring of a module file: inline, or a path relative to the module file.
fn module_ring(path: &Path, v: &Value, inputs: &mut Inputs, role: &str) -> CmdResult<(AnyRing, Value)> {
    match v.get("ring") {
        Some(Value::String(p)) => {
            let rp = path.parent().unwrap_or(Path::new(".")).join(p);
            let (rv, digest) = read_json(&rp)?;
            inputs.add(&format!("{role}_ring"), &rp, &digest);
            Ok((ring_from_json(&rv)?, rv))
        }
        Some(rv) => Ok((ring_from_json(rv)?, rv.clone())),
        None => Err(Failure::Input(format!("{}: missing field \"ring\"", path.display()))),
    }
}

fn load_module(path: &Path, inputs: &mut Inputs, role: &str) -> CmdResult<AnyModule> {
    let (v, digest) = read_json(path)?;
    inputs.add(role, path, &digest);
    let (ring, _) = module_ring(path, &v, inputs, role)?;
    Ok(module_from_json_with(&ring, &v)?)
}

fn load_ring(path: &Path, inputs: &mut Inputs) -> CmdResult<AnyRing> {
    let (v, digest) = read_json(path)?;
    inputs.add("ring", path, &digest);
    Ok(ring_from_json(&v)?)
}

/// A further module over the same ring as `base`.
fn load_module_over<R: RingJson>(base: &R, path: &Path, inputs: &mut Inputs, role: &str) -> CmdResult<FPModule<R>> {
    let (v, digest) = read_json(path)?;
    inputs.add(role, path, &digest);
    let (_, rv) = module_ring(path, &v, inputs, role)?;
    let normalized = match ring_from_json(&rv)? {
        AnyRing::Integers(r) => r.ring_json(),
        AnyRing::Fd(r) => r.ring_json(),
    };
    if normalized != base.ring_json() {
        return Err(Failure::Input(format!("{}: module is over a different ring", path.display())));
    }
    Ok(module_from_json_over(base, &v)?)
}

macro_rules! on_module {
    ($m:expr, $f:ident ( $($a:expr),* )) => {
        match $m {
            AnyModule::Integers(m) => $f(&m $(, $a)*),
            AnyModule::Fd(m) => $f(&m $(, $a)*),
        }
    };
}

fn inv(m: &FPModule<impl Ring>) -> Value {
    let i = m.invariant();
    json!({"display": i.to_string(), "data": invariant_to_json(&i)})
}

fn capped_json(c: Capped) -> Value {
    match c {
        Capped::Value(v) => json!({"value": v, "display": c.to_string()}),
        Capped::AtLeast(v) => json!({"at_least": v, "display": c.to_string()}),
    }
}

fn certificate(kind: &str, ring: Value, body: Value, checks: &Value) -> Value {
    let mut c = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("body".into(), other);
            m
        }
    };
    c.insert("kind".into(), json!(kind));
    c.insert("ring".into(), ring);
    c.insert("checks".into(), checks.clone());
    Value::Object(c)
}

// Per-kind checks, shared by the commands and `verify`.

fn resolve_checks<R: Ring>(res: &Resolution<R>) -> Value {
    let r = res.ring();
    let radical = res.maps.iter().all(|a| a.entries().iter().all(|x| r.in_radical(x)));
    json!({"exact": res.is_exact(), "minimal_flag": radical == res.minimal})
}

fn ext_checks<R: Ring>(res: &Resolution<R>, e: &ExtModule<R>) -> Value {
    let i = e.index;
    let exact = (res.len() > i || res.terminated()) && res.is_exact();
    let again = ext_from(res, i);
    let subquotient = again.cycles == e.cycles && again.boundaries == e.boundaries && again.raw == e.raw;
    let other = resolve_presentation(&res.module, i + 1);
    let independent = ext_from(&other, i).value().invariant() == e.value().invariant();
    json!({"resolution_exact": exact, "subquotient": subquotient, "independent": independent})
}

fn transpose_checks<R: Ring>(res: &Resolution<R>, t: &FPModule<R>) -> Value {
    let exact = (!res.is_empty() || res.terminated()) && res.is_exact();
    json!({"presentation_exact": exact, "matches": &transpose_from(res) == t})
}

fn dual_checks<R: Ring>(m: &FPModule<R>, dual: &FPModule<R>, gens: &halg::Matrix<R::Elem>) -> Value {
    let r = m.ring();
    let op = r.opposite();
    let shape = gens.cols() == m.n_gens() && gens.rows() == dual.n_gens();
    let functionals = shape && (m.relations().rows() == 0 || r.mat_is_zero(&r.mat_mul(m.relations(), &opposite_transfer(&op, gens))));
    let fresh = dual_module(m);
    let complete = shape
        && (fresh.generators.rows() == 0
            || (gens.rows() > 0 && op.solve(gens, &fresh.generators).is_some()))
        && fresh.module.invariant() == dual.invariant();
    json!({"functionals": functionals, "complete": complete})
}

fn resolve_cmd<R: RingJson>(m: &FPModule<R>, steps: usize) -> CmdResult<Payload> {
    let res = resolution(m, steps);
    let checks = resolve_checks(&res);
    let result = json!({"ranks": res.ranks(), "minimal": res.minimal, "terminated": res.terminated()});
    let body = json!({"steps": steps, "resolution": resolution_to_json(&res)});
    Ok(Payload { result, certificate: certificate("resolve", m.ring().ring_json(), body, &checks), checks })
}

fn ext_cmd<R: RingJson>(m: &FPModule<R>, i: usize) -> CmdResult<Payload> {
    let res = resolution(m, i + 1);
    let e = ext_from(&res, i);
    let checks = ext_checks(&res, &e);
    let result = json!({"index": i, "ext": inv(&e.value())});
    let body = json!({"resolution": resolution_to_json(&res), "ext": ext_to_json(&e)});
    Ok(Payload { result, certificate: certificate("ext", m.ring().ring_json(), body, &checks), checks })
}

fn transpose_cmd<R: RingJson>(m: &FPModule<R>) -> CmdResult<Payload> {
    let res = resolution(m, 1);
    let t = transpose_from(&res);
    let checks = transpose_checks(&res, &t);
    let result = json!({"transpose": inv(&t), "module": module_to_json(&t)});
    let body = json!({"resolution": resolution_to_json(&res), "transpose": module_to_json(&t)});
    Ok(Payload { result, certificate: certificate("transpose", m.ring().ring_json(), body, &checks), checks })
}

fn dual_cmd<R: RingJson>(m: &FPModule<R>) -> CmdResult<Payload> {
    let d = dual_module(m);
    let op = m.ring().opposite();
    let checks = dual_checks(m, &d.module, &d.generators);
    let result = json!({"dual": inv(&d.module), "module": module_to_json(&d.module)});
    let body = json!({
        "module": module_to_json(m),
        "dual": module_to_json(&d.module),
        "generators": matrix_to_json(&op, &d.generators),
    });
    Ok(Payload { result, certificate: certificate("dual", m.ring().ring_json(), body, &checks), checks })
}

fn grade_cmd<R: RingJson>(m: &FPModule<R>, cap: usize) -> CmdResult<Payload> {
    let g = grade(m, cap);
    let checks = json!({"recomputed": true});
    let body = json!({"module": module_to_json(m), "cap": cap, "grade": capped_json(g)});
    Ok(Payload { result: json!({"grade": capped_json(g), "cap": cap}), certificate: certificate("grade", m.ring().ring_json(), body, &checks), checks })
}

fn tf_cmd<R: RingJson>(m: &FPModule<R>, cap: usize) -> CmdResult<Payload> {
    let t = torsionfree_level(m, cap);
    let checks = json!({"recomputed": true});
    let body = json!({"module": module_to_json(m), "cap": cap, "level": t});
    let result = json!({"level": t, "cap": cap, "reached_cap": t == cap});
    Ok(Payload { result, certificate: certificate("tf-level", m.ring().ring_json(), body, &checks), checks })
}

fn lemma21_cmd<R: RingJson>(m: &FPModule<R>) -> CmdResult<Payload> {
    let l = lemma21_sequence(m);
    let checks = lemma21_checks_json(&l.verify());
    let result = json!({"ext1": inv(&l.ext1), "double_dual": inv(&l.double_dual), "ext2": inv(&l.ext2)});
    Ok(Payload { result, certificate: certificate("lemma21", m.ring().ring_json(), lemma21_to_json(&l), &checks), checks })
}

fn theorem_cmd<R: RingJson>(m: &FPModule<R>, d: usize) -> CmdResult<Payload> {
    let c = theorem_sequence(m, d)?;
    let checks = theorem_checks_json(&c.checks);
    let result = json!({
        "d": d,
        "b": inv(&c.b),
        "c": inv(&c.c),
        "projective_rank": c.projective.n_gens(),
        "ext_module": inv(&c.ext_module),
    });
    Ok(Payload { result, certificate: certificate("theorem", m.ring().ring_json(), theorem_to_json(&c), &checks), checks })
}

fn chain_cmd<R: RingJson>(m: &FPModule<R>, k: usize) -> CmdResult<Payload> {
    let c = spherical_chain(m, k)?;
    let checks = chain_checks_json(&c.checks);
    let result = json!({
        "k": k,
        "b": (0..k).map(|i| inv(c.b(i))).collect::<Vec<_>>(),
        "terms": c.terms.iter().map(inv).collect::<Vec<_>>(),
    });
    Ok(Payload { result, certificate: certificate("chain", m.ring().ring_json(), chain_to_json(&c), &checks), checks })
}

fn approx_cmd<R: RingJson>(t: &FPModule<R>, k: usize, tests: &[FPModule<R>]) -> CmdResult<Payload> {
    let c = approximation(t, k, tests)?;
    let checks = approx_checks_json(&c.checks);
    let result = json!({
        "k": k,
        "x": inv(&c.x),
        "middle": inv(&c.middle),
        "y": inv(&c.y),
        "stable": c.stable.iter().map(|s| json!({"test": s.test, "iso": s.iso})).collect::<Vec<_>>(),
    });
    Ok(Payload { result, certificate: certificate("approx", t.ring().ring_json(), approx_to_json(&c), &checks), checks })
}

fn eg_cmd<R: RingJson>(m: &FPModule<R>, d: usize) -> CmdResult<Payload> {
    let c = evans_griffith(m, d)?;
    let checks = eg_checks_json(&c.checks);
    let result = json!({"d": d, "s": inv(&c.s), "s_level": c.s_level, "q_rank": c.q.n_gens(), "cap": c.theorem.cap.max(d + 2)});
    Ok(Payload { result, certificate: certificate("eg", m.ring().ring_json(), eg_to_json(&c), &checks), checks })
}

fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::Grade { sample, i, grade } => json!({"kind": "grade", "sample": sample, "i": i, "grade": grade}),
        Violation::Syzygy { sample, i, level } => json!({"kind": "syzygy", "sample": sample, "i": i, "level": level}),
    }
}

fn spotcheck_cmd<R: RingJson>(base: &R, k: usize, samples: &[FPModule<R>]) -> CmdResult<Payload> {
    let rep = grade_spotcheck(k, samples);
    let violations: Vec<Value> = rep.violations.iter().map(violation_json).collect();
    let checks = json!({"recomputed": true});
    let result = json!({"k": k, "samples": rep.samples, "checks": rep.checks, "clean": rep.clean(), "violations": violations});
    let body = json!({"k": k, "samples": samples.iter().map(module_to_json).collect::<Vec<_>>(), "violations": violations});
    Ok(Payload { result, certificate: certificate("spotcheck", base.ring_json(), body, &checks), checks })
}

fn classify_cmd(ring: &AnyRing, k: usize, cap: usize) -> CmdResult<Payload> {
    let rep = match ring {
        AnyRing::Integers(r) => classify_ring(r, None, k, cap)?,
        AnyRing::Fd(r) => classify(r, k, cap)?,
    };
    let checks = gorenstein_checks_json(&rep.verify());
    let result = json!({
        "k": k,
        "cap": cap,
        "fd": rep.fd,
        "quasi_k_gorenstein": rep.quasi_k_gorenstein,
        "k_gorenstein": rep.k_gorenstein,
        "indexing": rep.indexing,
        "terms": rep.resolution.terms.iter().map(inv).collect::<Vec<_>>(),
    });
    Ok(Payload { result, certificate: certificate("classify", rep.ring.ring_json(), gorenstein_to_json(&rep), &checks), checks })
}

// Verification from a serialized certificate.

fn recheck<R: RingJson>(base: &R, kind: &str, c: &Value) -> CmdResult<Value> {
    let acting = |side: Side| acting(base, side);
    Ok(match kind {
        "resolve" => resolve_checks(&resolution_from_json(base, field(c, "resolution")?)?),
        "ext" => {
            let res = resolution_from_json(base, field(c, "resolution")?)?;
            let e = ext_from_json(base, field(c, "ext")?)?;
            ext_checks(&res, &e)
        }
        "transpose" => {
            let res = resolution_from_json(base, field(c, "resolution")?)?;
            let t = module_from_json_over(base, field(c, "transpose")?)?;
            transpose_checks(&res, &t)
        }
        "dual" => {
            let m = module_from_json_over(base, field(c, "module")?)?;
            let d = module_from_json_over(base, field(c, "dual")?)?;
            let op = acting(m.side().flip());
            let gens = matrix_from_json(&op, field(c, "generators")?, m.n_gens())?;
            dual_checks(&m, &d, &gens)
        }
        "grade" => {
            let m = module_from_json_over(base, field(c, "module")?)?;
            let g = grade(&m, usize_field(c, "cap")?);
            json!({"recomputed": capped_json(g) == *field(c, "grade")?})
        }
        "tf-level" => {
            let m = module_from_json_over(base, field(c, "module")?)?;
            json!({"recomputed": torsionfree_level(&m, usize_field(c, "cap")?) == usize_field(c, "level")?})
        }
        "lemma21" => lemma21_checks_json(&lemma21_from_json(base, c)?.verify()),
        "theorem" => theorem_checks_json(&theorem_from_json(base, c)?.verify()),
        "chain" => chain_checks_json(&chain_from_json(base, c)?.verify()),
        "approx" => approx_checks_json(&approx_from_json(base, c)?.verify()),
        "eg" => eg_checks_json(&eg_from_json(base, c)?.verify()),
        "spotcheck" => {
            let samples = array_field(c, "samples")?.iter().map(|s| module_from_json_over(base, s)).collect::<halg::Result<Vec<_>>>()?;
            let rep = grade_spotcheck(usize_field(c, "k")?, &samples);
            let violations: Vec<Value> = rep.violations.iter().map(violation_json).collect();
            json!({"recomputed": Value::Array(violations) == *field(c, "violations")?})
        }
        other => return Err(Failure::Input(format!("unknown certificate kind {other:?}"))),
    })
}

fn verify_cmd(v: &Value) -> CmdResult<Payload> {
    let c = match v.get("certificate") {
        Some(c) => c,
        None => v,
    };
    let kind = str_field(c, "kind")?;
    let stored = field(c, "checks")?;
    let checks = if kind == "classify" {
        gorenstein_checks_json(&gorenstein_from_json(c)?.verify())
    } else {
        match ring_from_json(field(c, "ring")?)? {
            AnyRing::Integers(r) => recheck(&r, kind, c)?,
            AnyRing::Fd(r) => recheck(&r, kind, c)?,
        }
    };
    let matches = &checks == stored;
    let result = json!({"kind": kind, "matches_stored": matches});
    Ok(Payload { result, certificate: c.clone(), checks })
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> CmdResult<(&'static str, Value, Payload)> {
    Ok(match cmd {
        Command::Resolve { module, steps } => {
            let m = load_module(module, inputs, "module")?;
            ("resolve", json!({"steps": steps}), on_module!(m, resolve_cmd(*steps))?)
        }
        Command::Ext { module, i } => {
            let m = load_module(module, inputs, "module")?;
            ("ext", json!({"i": i}), on_module!(m, ext_cmd(*i))?)
        }
        Command::Transpose { module } => ("transpose", json!({}), on_module!(load_module(module, inputs, "module")?, transpose_cmd())?),
        Command::Dual { module } => ("dual", json!({}), on_module!(load_module(module, inputs, "module")?, dual_cmd())?),
        Command::Grade { module, cap } => {
            ("grade", json!({"cap": cap}), on_module!(load_module(module, inputs, "module")?, grade_cmd(*cap))?)
        }
        Command::TfLevel { module, cap } => {
            ("tf-level", json!({"cap": cap}), on_module!(load_module(module, inputs, "module")?, tf_cmd(*cap))?)
        }
        Command::Lemma21 { module } => ("lemma21", json!({}), on_module!(load_module(module, inputs, "module")?, lemma21_cmd())?),
        Command::Theorem { module, d } => ("theorem", json!({"d": d}), on_module!(load_module(module, inputs, "module")?, theorem_cmd(*d))?),
        Command::Chain { module, k } => ("chain", json!({"k": k}), on_module!(load_module(module, inputs, "module")?, chain_cmd(*k))?),
        Command::Eg { module, d } => ("eg", json!({"d": d}), on_module!(load_module(module, inputs, "module")?, eg_cmd(*d))?),
        Command::Approx { module, k, test_h } => {
            let t = load_module(module, inputs, "module")?;
            let args = json!({"k": k, "tests": test_h.len()});
            let payload = match t {
                AnyModule::Integers(t) => {
                    let tests = load_tests(&Integers, test_h, inputs, || integer_corpus().into_iter().map(|x| x.1).collect())?;
                    approx_cmd(&t, *k, &tests)?
                }
                AnyModule::Fd(t) => {
                    let base = halg::io::RingJson::base_ring(t.ring());
                    let side = t.side();
                    let tests = load_tests(&base, test_h, inputs, || fd_corpus(&base, side).into_iter().map(|x| x.1).collect())?;
                    approx_cmd(&t, *k, &tests)?
                }
            };
            ("approx", args, payload)
        }
        Command::Classify { ring, k, cap } => {
            let r = load_ring(ring, inputs)?;
            ("classify", json!({"k": k, "cap": cap}), classify_cmd(&r, *k, *cap)?)
        }
        Command::Spotcheck { ring, k, sample } => {
            let r = load_ring(ring, inputs)?;
            let args = json!({"k": k, "samples": sample.len()});
            let payload = match &r {
                AnyRing::Integers(base) => {
                    let samples = load_tests(base, sample, inputs, || integer_corpus().into_iter().map(|x| x.1).collect())?;
                    spotcheck_cmd(base, *k, &samples)?
                }
                AnyRing::Fd(base) => {
                    let samples = load_tests(base, sample, inputs, || {
                        let mut s: Vec<_> = fd_corpus(base, Side::Left).into_iter().map(|x| x.1).collect();
                        s.extend(fd_corpus(base, Side::Right).into_iter().map(|x| x.1));
                        s
                    })?;
                    spotcheck_cmd(base, *k, &samples)?
                }
            };
            ("spotcheck", args, payload)
        }
        Command::Verify { certificate } => {
            let (v, digest) = read_json(certificate)?;
            inputs.add("certificate", certificate, &digest);
            ("verify", json!({}), verify_cmd(&v)?)
        }
    })
}

/// Caller-supplied modules over `base`, or the default corpus when none are given.
fn load_tests<R: RingJson>(
    base: &R,
    paths: &[PathBuf],
    inputs: &mut Inputs,
    default: impl FnOnce() -> Vec<FPModule<R>>,
) -> CmdResult<Vec<FPModule<R>>> {
    if paths.is_empty() {
        return Ok(default());
    }
    paths.iter().enumerate().map(|(i, p)| load_module_over(base, p, inputs, &format!("sample_{i}"))).collect()
}

fn base_report(argv: &[String], command: &str, args: Value, inputs: Inputs) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("argv".into(), json!(argv));
    m.insert("command".into(), json!(command));
    m.insert("args".into(), args);
    m.insert("inputs".into(), Value::Object(inputs.0));
    m.insert("defaults".into(), json!({"cap": DEFAULT_CAP}));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m
}

fn finish(mut m: Map<String, Value>, started: Instant) -> String {
    let digest = report_digest(&Value::Object(m.clone()));
    m.insert("digest".into(), json!(digest));
    m.insert("timing_ms".into(), json!(started.elapsed().as_millis() as u64));
    canonical_string(&Value::Object(m))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Resolve { .. } => "resolve",
        Command::Ext { .. } => "ext",
        Command::Transpose { .. } => "transpose",
        Command::Dual { .. } => "dual",
        Command::Grade { .. } => "grade",
        Command::TfLevel { .. } => "tf-level",
        Command::Lemma21 { .. } => "lemma21",
        Command::Theorem { .. } => "theorem",
        Command::Chain { .. } => "chain",
        Command::Approx { .. } => "approx",
        Command::Eg { .. } => "eg",
        Command::Classify { .. } => "classify",
        Command::Spotcheck { .. } => "spotcheck",
        Command::Verify { .. } => "verify",
    }
}

/// Run one command line (`args[0]` is the program name).
pub fn run<S: AsRef<str>>(args: &[S]) -> Outcome {
    let started = Instant::now();
    let cli = match Cli::try_parse_from(args.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_MALFORMED,
            };
            return Outcome { code, stdout: if code == EXIT_OK { e.to_string() } else { String::new() }, stderr: if code == EXIT_OK { String::new() } else { e.to_string() } };
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|s| s.as_ref().to_string()).collect();
    let mut inputs = Inputs::new();
    match dispatch(&cli.command, &mut inputs) {
        Ok((name, args, p)) => {
            let mut ok = all_true(&p.checks);
            if name == "verify" {
                ok = ok && p.result["matches_stored"] == json!(true);
            }
            let mut m = base_report(&argv, name, args, inputs);
            m.insert("result".into(), p.result);
            m.insert("certificate".into(), p.certificate);
            m.insert("checks".into(), p.checks);
            m.insert("ok".into(), json!(ok));
            let code = if ok { EXIT_OK } else { EXIT_CHECK_FAILED };
            let stderr = if ok { String::new() } else { "certificate checks failed".to_string() };
            Outcome { code, stdout: finish(m, started), stderr }
        }
        Err(f) => {
            let mut m = base_report(&argv, command_name(&cli.command), json!({}), inputs);
            m.insert("error".into(), f.to_json());
            m.insert("ok".into(), json!(false));
            Outcome { code: f.code(), stdout: finish(m, started), stderr: f.message() }
        }
    }
}
