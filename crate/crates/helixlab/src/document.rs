//! The JSON problem document read by every subcommand.

use std::collections::BTreeMap;
use std::str::FromStr;

use helixlab_core::kronecker::{random_module, Field, KroneckerModule};
use helixlab_core::{Error, MukaiVector, PicClass, Rational, Result, SurfaceModel, SurfacePreset};
use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision integer carried as a plain JSON number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&self.0.to_string()).expect("integer literal").serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(deserializer)?;
        BigInt::from_str(&n.to_string()).map(Int).map_err(|_| D::Error::custom(format!("expected an integer, got {n}")))
    }
}

impl From<i64> for Int {
    fn from(x: i64) -> Self {
        Int(x.into())
    }
}

/// Matrix entry: a JSON integer, or a `"num/den"` string for rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar(pub Rational);

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            Int(self.0.to_integer()).serialize(serializer)
        } else {
            serializer.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(deserializer)? {
            serde_json::Value::Number(n) => BigInt::from_str(&n.to_string())
                .map(|x| Scalar(Rational::from_integer(x)))
                .map_err(|_| D::Error::custom(format!("expected an integer entry, got {n}"))),
            serde_json::Value::String(s) => parse_rational(&s).map(Scalar).map_err(D::Error::custom),
            other => Err(D::Error::custom(format!("expected a number or \"p/q\", got {other}"))),
        }
    }
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let bad = || format!("malformed rational '{s}'");
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(Rational::new(num, den))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    /// `projective-plane`, `blowup` or `quadric`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSpec {
    pub r: Int,
    pub c1: Vec<Int>,
    pub s: Int,
}

impl VectorSpec {
    pub fn to_vector(&self) -> MukaiVector {
        MukaiVector {
            r: self.r.0.clone(),
            c1: PicClass(self.c1.iter().map(|x| x.0.clone()).collect()),
            s: self.s.0.clone(),
        }
    }

    pub fn from_vector(v: &MukaiVector) -> Self {
        VectorSpec { r: Int(v.r.clone()), c1: v.c1.coords().iter().cloned().map(Int).collect(), s: Int(v.s.clone()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KroneckerSpec {
    pub h: usize,
    pub m: usize,
    pub n: usize,
    /// `"F<p>"` for a prime field, `"Q"` for the rationals.
    pub field: String,
    /// `h` matrices of shape `n x m`. When absent the module is drawn from
    /// `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<Scalar>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Reduction primes for rational modules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u32>>,
}

pub fn parse_field(s: &str) -> Result<Field> {
    let t = s.trim();
    if t == "Q" {
        return Ok(Field::Rational);
    }
    let digits = t.strip_prefix("F_").or_else(|| t.strip_prefix('F')).unwrap_or(t);
    let p: u64 = digits.parse().map_err(|_| Error::InvalidInput(format!("unknown field '{s}' (use Q or F<p>)")))?;
    Field::prime(p)
}

pub fn field_name(f: Field) -> String {
    f.to_string()
}

impl KroneckerSpec {
    pub fn field(&self) -> Result<Field> {
        parse_field(&self.field)
    }

    /// A `seed_override` (the `--seed` flag) wins; otherwise `matrices`,
    /// then `seed`.
    pub fn module(&self, seed_override: Option<u64>) -> Result<KroneckerModule> {
        let field = self.field()?;
        if let Some(seed) = seed_override {
            return random_module(self.h, self.m, self.n, field, seed);
        }
        if let Some(mats) = &self.matrices {
            if mats.len() != self.h {
                return Err(Error::InvalidModule(format!("h = {} but {} matrices given", self.h, mats.len())));
            }
            let mats =
                mats.iter().map(|a| a.iter().map(|row| row.iter().map(|x| x.0.clone()).collect()).collect()).collect();
            return KroneckerModule::new(field, self.m, self.n, mats);
        }
        match self.seed {
            Some(seed) => random_module(self.h, self.m, self.n, field, seed),
            None => Err(Error::InvalidInput("kronecker payload needs matrices or a seed".into())),
        }
    }

    pub fn from_module(module: &KroneckerModule, seed: Option<u64>) -> Self {
        KroneckerSpec {
            h: module.h(),
            m: module.m(),
            n: module.n(),
            field: field_name(module.field()),
            matrices: Some(
                module
                    .mats()
                    .iter()
                    .map(|a| a.iter().map(|row| row.iter().cloned().map(Scalar).collect()).collect())
                    .collect(),
            ),
            seed,
            primes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vectors: BTreeMap<String, VectorSpec>,
    /// Two vector names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<Vec<String>>,
    /// Ordered names `E_1, E_2, F_2, ..., F_l`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection: Option<Vec<String>>,
    /// Name of the candidate vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kronecker: Option<KroneckerSpec>,
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("problem document: {e}")))
    }

    /// Canonical rendering: sorted keys, two-space indentation, trailing
    /// newline.
    pub fn to_canonical_string(&self) -> String {
        let value = serde_json::to_value(self).expect("document serialises");
        crate::render::canonical_string(&value)
    }

    pub fn surface(&self) -> Result<SurfaceModel> {
        let spec = self.surface.as_ref().ok_or_else(|| Error::InvalidInput("document has no surface".into()))?;
        if spec.kind == "blowup" && spec.k.is_none() {
            return Err(Error::InvalidSurface("blowup needs k".into()));
        }
        if spec.kind != "blowup" && spec.k.is_some() {
            return Err(Error::InvalidSurface(format!("k is only meaningful for blowup, not {}", spec.kind)));
        }
        SurfaceModel::preset(SurfacePreset::from_name(&spec.kind, spec.k)?)
    }

    /// Checks every named vector against the surface: `c1` length and the
    /// parity condition.
    pub fn validate_vectors(&self, surface: &SurfaceModel) -> Result<()> {
        for (name, spec) in &self.vectors {
            if spec.c1.len() != surface.basis_rank() {
                return Err(Error::InvalidInput(format!(
                    "vector '{name}': c1 has {} coordinates, the surface needs {}",
                    spec.c1.len(),
                    surface.basis_rank()
                )));
            }
            surface.check_parity(&spec.to_vector()).map_err(|e| match e {
                Error::InvalidMukaiVector { reason, twice_value } => Error::InvalidMukaiVector {
                    reason: format!("vector '{name}' = {}: {reason}", spec.to_vector()),
                    twice_value,
                },
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn vector(&self, name: &str) -> Result<MukaiVector> {
        self.vectors
            .get(name)
            .map(VectorSpec::to_vector)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vector name '{name}'")))
    }

    pub fn pair(&self) -> Result<(String, String)> {
        match self.pair.as_deref() {
            Some([a, b]) => Ok((a.clone(), b.clone())),
            Some(other) => Err(Error::InvalidInput(format!("pair needs two names, got {}", other.len()))),
            None => Err(Error::InvalidInput("document has no pair".into())),
        }
    }
}
