//! Subcommands: each turns a problem document into a canonical JSON report
//! and an exit code.

use helixlab_core::kronecker::{census, check_stability, check_stability_rational, Field, StabilityVerdict};
use helixlab_core::moduli::{theorem_report, FullCollection, ResolutionShape, TheoremApplies, Verdict};
use helixlab_core::mutation::classify_pair;
use helixlab_core::system::{generate_system, PairSystem};
use helixlab_core::{Error, MukaiVector, Result, SurfaceModel};
use serde_json::{json, Value};

use crate::document::{field_name, KroneckerSpec, ProblemDocument, Scalar};
use crate::render::{int, object, or_undefined, quadratic, rational, vector};

/// Primes used for rational modules when the document names none.
pub const DEFAULT_PRIMES: [u32; 3] = [2, 3, 5];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, exit_code: 0 }
    }
}

/// 2: malformed input or parity; 3: pair or collection fails the
/// exceptional/full checks; 4: census over budget; 5: outside the scope of
/// the comparison theorems.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotExceptionalPair(_)
        | Error::InvalidCollection(_)
        | Error::NotFull(_)
        | Error::InvalidMutation(_)
        | Error::AmbiguousMutation => 3,
        Error::TooLarge { .. } => 4,
        Error::TheoremOutOfScope(_) | Error::NoLimits(_) | Error::NotApplicable(_) | Error::PreconditionViolated(_) => {
            5
        }
        _ => 2,
    }
}

fn surface_with_vectors(doc: &ProblemDocument) -> Result<SurfaceModel> {
    let surface = doc.surface()?;
    doc.validate_vectors(&surface)?;
    Ok(surface)
}

fn surface_value(doc: &ProblemDocument) -> Value {
    serde_json::to_value(&doc.surface).expect("surface serialises")
}

fn invariants(surface: &SurfaceModel, name: &str, v: &MukaiVector) -> Result<Value> {
    Ok(object([
        ("name", json!(name)),
        ("vector", vector(v)),
        ("rank", int(&v.r)),
        ("d", int(&surface.degree_of(v)?)),
        ("slope", or_undefined(surface.slope(v), |x| rational(&x))?),
        ("q", or_undefined(surface.q(v), |x| rational(&x))?),
        ("nu", or_undefined(surface.nu(v), |x| Value::Array(x.coords().iter().map(rational).collect()))?),
        ("chi_self", int(&surface.euler(v, v)?)),
        ("numerically_exceptional", json!(surface.is_numerically_exceptional(v))),
    ]))
}

pub fn run_chi(doc: &ProblemDocument) -> Result<Outcome> {
    let surface = surface_with_vectors(doc)?;
    let (a, b) = doc.pair()?;
    let (v, w) = (doc.vector(&a)?, doc.vector(&b)?);
    let class = classify_pair(&surface, &v, &w)?;
    Ok(Outcome::ok(object([
        ("command", json!("chi")),
        ("surface", surface_value(doc)),
        ("v", invariants(&surface, &a, &v)?),
        ("w", invariants(&surface, &b, &w)?),
        ("chi", int(&class.chi)),
        ("chi_reverse", int(&surface.euler(&w, &v)?)),
        ("chi_minus", int(&class.chi_minus)),
        ("pair_type", json!(class.pair_type.as_str())),
        ("h", int(&class.h)),
        ("numerically_exceptional_pair", json!(class.is_numerically_exceptional_pair)),
    ])))
}

fn limits_value(system: &PairSystem) -> Value {
    match system.mu_limits() {
        Some(l) => json!({
            "minus_infinity": quadratic(&l.minus_infinity),
            "plus_infinity": quadratic(&l.plus_infinity),
        }),
        None => Value::Null,
    }
}

pub fn run_system(doc: &ProblemDocument, lo: Option<i64>, hi: Option<i64>) -> Result<Outcome> {
    let surface = surface_with_vectors(doc)?;
    let (a, b) = doc.pair()?;
    let (v1, v2) = (doc.vector(&a)?, doc.vector(&b)?);
    let (dlo, dhi) = PairSystem::DEFAULT_WINDOW;
    let system = generate_system(&surface, &v1, &v2, lo.unwrap_or(dlo), hi.unwrap_or(dhi))?;
    let members = system
        .members()
        .map(|(i, m)| {
            Ok(object([
                ("i", json!(i)),
                ("vector", vector(m)),
                ("sign", json!(system.sign(i))),
                ("rank", int(&m.r)),
                ("d", int(&surface.degree_of(m)?)),
                ("mu", or_undefined(surface.slope(m), |x| rational(&x))?),
            ]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::ok(object([
        ("command", json!("system")),
        ("surface", surface_value(doc)),
        ("pair", json!([a, b])),
        ("window", json!([system.window().0, system.window().1])),
        ("h", int(system.h())),
        ("type", json!(system.system_type().as_str())),
        ("ext_pair_index", json!(system.ext_pair_index())),
        ("members", Value::Array(members)),
        ("mu_limits", limits_value(&system)),
    ])))
}

fn verdict_value(v: &Verdict) -> Value {
    json!({ "holds": v.holds, "detail": v.detail })
}

pub fn run_theorem(doc: &ProblemDocument) -> Result<Outcome> {
    let surface = surface_with_vectors(doc)?;
    let names = doc.collection.as_ref().ok_or_else(|| Error::InvalidInput("document has no collection".into()))?;
    if names.len() < 2 {
        return Err(Error::InvalidCollection("need at least E_1 and E_2".into()));
    }
    let cand = doc.candidate.as_ref().ok_or_else(|| Error::InvalidInput("document has no candidate".into()))?;
    let members = names.iter().map(|n| doc.vector(n)).collect::<Result<Vec<_>>>()?;
    let v = doc.vector(cand)?;
    let coll = FullCollection::new(surface.clone(), members[0].clone(), members[1].clone(), members[2..].to_vec())?;
    let r = theorem_report(&coll, &v)?;
    let system = coll.system()?;
    let assumption = match r.applies {
        TheoremApplies::PlusTypeGivenEvStability => {
            json!("ev_{E_1,E_2,x} is stable for every point x (not checked)")
        }
        _ => Value::Null,
    };
    let report = object([
        ("command", json!("theorem")),
        ("surface", surface_value(doc)),
        ("collection", json!(names)),
        ("candidate", json!({ "name": cand, "vector": vector(&v) })),
        ("fullness", json!("numerical")),
        (
            "conditions",
            json!({
                "cond0": verdict_value(&r.conditions.cond0),
                "cond1": verdict_value(&r.conditions.cond1),
                "cond2minus": verdict_value(&r.conditions.cond2_minus),
                "cond2plus": verdict_value(&r.conditions.cond2_plus),
            }),
        ),
        ("system_type", json!(r.system_type.as_str())),
        ("ext_pair_index", json!(r.ext_pair_index)),
        (
            "system",
            json!({
                "e0": vector(system.member(0)),
                "e3": vector(system.member(3)),
            }),
        ),
        ("h", int(&r.h)),
        ("m", int(&r.m)),
        ("n", int(&r.n)),
        ("chi_e3_v", int(&r.chi_e3_v)),
        ("chi_e2_v", int(&r.chi_e2_v)),
        ("m_prime", int(&r.decomposition.m_prime)),
        ("n_prime", int(&r.decomposition.n_prime)),
        ("betas", Value::Array(r.decomposition.betas.iter().map(int).collect())),
        ("dim_n", int(&r.dim_n)),
        ("mu_v", rational(&r.mu_v)),
        (
            "mu_limits",
            json!({
                "minus_infinity": quadratic(&r.mu_limits.minus_infinity),
                "plus_infinity": quadratic(&r.mu_limits.plus_infinity),
            }),
        ),
        ("shape", r.shape.map_or(Value::Null, |s| json!(s.as_str()))),
        (
            "shape_index",
            match r.shape {
                Some(ResolutionShape::DegenerateSlopeMatch { index }) => json!(index),
                _ => Value::Null,
            },
        ),
        ("shape_reading", json!(r.shape_reading)),
        ("applies", json!(r.applies.as_str())),
        ("assumption", assumption),
        ("ev_hint", json!(r.ev_hint)),
    ]);
    let exit_code = if r.applies == TheoremApplies::None { 1 } else { 0 };
    Ok(Outcome { report, exit_code })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum KronAction {
    Check,
    Census,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KronOptions {
    pub jobs: usize,
    pub budget: u64,
    pub seed: Option<u64>,
}

fn stability_value(v: &StabilityVerdict) -> Value {
    json!({
        "tag": v.tag.as_str(),
        "witness": v.witness.as_ref().map(|w| json!({
            "basis": w.basis.iter().map(|row| row.iter().cloned().map(Scalar).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "dim": w.dim(),
            "image_dim": w.image_dim,
        })),
        "primes": v.primes,
        "per_prime": v.per_prime.iter().map(|(p, t)| json!({"prime": p, "tag": t.as_str()})).collect::<Vec<_>>(),
        "certified": v.certified,
    })
}

fn kron_spec(doc: &ProblemDocument) -> Result<&KroneckerSpec> {
    doc.kronecker.as_ref().ok_or_else(|| Error::InvalidInput("document has no kronecker payload".into()))
}

pub fn run_kron(doc: &ProblemDocument, action: KronAction, opts: KronOptions) -> Result<Outcome> {
    let spec = kron_spec(doc)?;
    match action {
        KronAction::Check => {
            let module = spec.module(opts.seed)?;
            let verdict = match module.field() {
                Field::Prime(_) => check_stability(&module)?,
                Field::Rational => {
                    check_stability_rational(&module, spec.primes.as_deref().unwrap_or(&DEFAULT_PRIMES))?
                }
            };
            let module_value =
                serde_json::to_value(KroneckerSpec::from_module(&module, None)).expect("module serialises");
            Ok(Outcome::ok(object([
                ("command", json!("kron-check")),
                ("module", module_value),
                ("verdict", stability_value(&verdict)),
            ])))
        }
        KronAction::Census => {
            let Field::Prime(p) = spec.field()? else {
                return Err(Error::InvalidInput("census needs a prime field".into()));
            };
            let c = census(spec.h, spec.m, spec.n, u64::from(p), opts.budget, opts.jobs)?;
            Ok(Outcome::ok(object([
                ("command", json!("kron-census")),
                ("h", json!(spec.h)),
                ("m", json!(spec.m)),
                ("n", json!(spec.n)),
                ("field", json!(field_name(Field::Prime(p)))),
                (
                    "counts",
                    json!({
                        "total": c.total,
                        "stable": c.stable,
                        "strictly_semistable": c.strictly_semistable,
                        "unstable": c.unstable,
                    }),
                ),
            ])))
        }
        KronAction::Random => {
            let seed = opts
                .seed
                .or(spec.seed)
                .ok_or_else(|| Error::InvalidInput("random needs --seed or a seed field".into()))?;
            let module = spec.module(Some(seed))?;
            let mut out = KroneckerSpec::from_module(&module, Some(seed));
            out.primes = spec.primes.clone();
            let generated = ProblemDocument { kronecker: Some(out), ..Default::default() };
            Ok(Outcome::ok(serde_json::to_value(generated).expect("document serialises")))
        }
    }
}
