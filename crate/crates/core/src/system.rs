//! The system `{E_i}` generated by an exceptional pair.
//!
//! Members are computed on classes by the signed three-term recursion
//! `w_{i+1} = h w_i - w_{i-1}`, where `w_i = s_i v_i` and `v_i` is the class
//! of `E_i`. The signs `s_i` are stored explicitly; `v_i` is normalised to
//! have non-negative rank, and positive degree when the rank is zero (the
//! torsion members `O_e(d)`). With `E_1 = v1`, `E_2 = v2`, members to the
//! right are successive right mutations and members to the left successive
//! left mutations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{MukaiVector, SurfaceModel};
use crate::mutation::{classify_pair, PairType};
use crate::quadratic::QuadraticNumber;
use crate::Rational;

/// Upper bound on the outward walks used to locate features of a system.
/// Every walk terminates well before this on valid input; hitting it means
/// the input was not an exceptional pair.
const WALK_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemType {
    /// All neighbouring pairs are hom.
    Plus,
    /// Exactly one ext pair.
    Minus,
    /// `h = 1`: classes repeat with period 3.
    H1Periodic,
    /// `h = 0`: members alternate between the two generators.
    H0Alternating,
}

impl SystemType {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemType::Plus => "plus",
            SystemType::Minus => "minus",
            SystemType::H1Periodic => "h1-periodic",
            SystemType::H0Alternating => "h0-alternating",
        }
    }
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemClass {
    pub system_type: SystemType,
    /// `p` such that `(E_p, E_{p+1})` is the ext pair (minus type only).
    pub ext_pair_index: Option<i64>,
}

/// Limit slopes `mu_{-inf}` and `mu_{+inf}` of a system with `h > 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuLimits {
    pub minus_infinity: QuadraticNumber,
    pub plus_infinity: QuadraticNumber,
}

/// Normalises a signed class: rank >= 0, and degree > 0 at rank zero.
fn normalize(surface: &SurfaceModel, w: &MukaiVector) -> (i8, MukaiVector) {
    let flip = match w.r.cmp(&BigInt::zero()) {
        Ordering::Greater => false,
        Ordering::Less => true,
        Ordering::Equal => surface.degree_of(w).map(|d| d.is_negative()).unwrap_or(false),
    };
    if flip {
        (-1, -w)
    } else {
        (1, w.clone())
    }
}

/// Walks the signed recursion in one direction starting from two adjacent
/// signed members.
struct SignedWalk {
    prev: MukaiVector,
    cur: MukaiVector,
    h: BigInt,
}

impl SignedWalk {
    fn step(&mut self) -> MukaiVector {
        let next = &self.cur.scale(&self.h) - &self.prev;
        self.prev = std::mem::replace(&mut self.cur, next.clone());
        next
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSystem {
    surface: SurfaceModel,
    lo: i64,
    hi: i64,
    /// `w_1`, `w_2`
    base: (MukaiVector, MukaiVector),
    signed: Vec<MukaiVector>,
    members: Vec<MukaiVector>,
    signs: Vec<i8>,
    h: BigInt,
    system_type: SystemType,
    ext_pair_index: Option<i64>,
    mu_limits: Option<MuLimits>,
}

impl PairSystem {
    pub const DEFAULT_WINDOW: (i64, i64) = (-2, 5);

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn h(&self) -> &BigInt {
        &self.h
    }

    pub fn system_type(&self) -> SystemType {
        self.system_type
    }

    pub fn ext_pair_index(&self) -> Option<i64> {
        self.ext_pair_index
    }

    pub fn mu_limits(&self) -> Option<&MuLimits> {
        self.mu_limits.as_ref()
    }

    fn offset(&self, i: i64) -> usize {
        assert!((self.lo..=self.hi).contains(&i), "index {i} outside window [{}, {}]", self.lo, self.hi);
        (i - self.lo) as usize
    }

    /// Class `v_i` of `E_i` (non-negative rank).
    pub fn member(&self, i: i64) -> &MukaiVector {
        &self.members[self.offset(i)]
    }

    /// `s_i`
    pub fn sign(&self, i: i64) -> i8 {
        self.signs[self.offset(i)]
    }

    /// `w_i = s_i v_i`
    pub fn signed_member(&self, i: i64) -> &MukaiVector {
        &self.signed[self.offset(i)]
    }

    pub fn members(&self) -> impl Iterator<Item = (i64, &MukaiVector)> {
        self.indices().zip(self.members.iter())
    }

    /// Signed member at any index, computed from the generating pair.
    pub fn signed_member_at(&self, i: i64) -> MukaiVector {
        if (self.lo..=self.hi).contains(&i) {
            return self.signed_member(i).clone();
        }
        signed_at(&self.base, &self.h, i)
    }

    /// Normalised member at any index.
    pub fn member_at(&self, i: i64) -> MukaiVector {
        normalize(&self.surface, &self.signed_member_at(i)).1
    }

    /// The same system materialised on a different window.
    pub fn extended(&self, lo: i64, hi: i64) -> Result<PairSystem> {
        let (v1, v2) = (&self.base.0, &self.base.1);
        let mut out = build(&self.surface, v1, v2, &self.h, lo, hi)?;
        out.system_type = self.system_type;
        out.ext_pair_index = self.ext_pair_index;
        out.mu_limits = self.mu_limits.clone();
        Ok(out)
    }

    /// Pair type of `(E_i, E_{i+1})`.
    pub fn pair_type_at(&self, i: i64) -> PairType {
        let a = self.member_at(i);
        let b = self.member_at(i + 1);
        PairType::from_skew(&self.surface.euler_minus(&a, &b).expect("same surface"))
    }

    /// Limit slopes from the neighbouring pair `(i, i+1)`; the result does
    /// not depend on `i`.
    pub fn mu_limits_at(&self, i: i64) -> Result<MuLimits> {
        let x = xh(&self.h)?;
        let wi = self.signed_member_at(i);
        let wj = self.signed_member_at(i + 1);
        let s = &self.surface;
        let (ri, rj) = (Rational::from_integer(wi.r.clone()), Rational::from_integer(wj.r.clone()));
        let di = Rational::from_integer(s.degree_of(&wi)?);
        let dj = Rational::from_integer(s.degree_of(&wj)?);
        // mu_{-inf} = (x d_{i+1} - d_i) / (x r_{i+1} - r_i)
        let minus = &x.mul_rational(&dj).add_rational(&-di.clone()) / &x.mul_rational(&rj).add_rational(&-ri.clone());
        // mu_{+inf} = (x d_i - d_{i+1}) / (x r_i - r_{i+1})
        let plus = &x.mul_rational(&di).add_rational(&-dj) / &x.mul_rational(&ri).add_rational(&-rj);
        Ok(MuLimits { minus_infinity: minus, plus_infinity: plus })
    }

    /// Smallest rank in the whole system, located by walking downhill from
    /// `E_1`. Ranks along a plus-type system form a convex positive sequence.
    pub fn min_rank(&self) -> Result<BigInt> {
        if self.system_type != SystemType::Plus {
            return Err(Error::NotApplicable(format!(
                "minimal rank walk needs a plus-type system, got {}",
                self.system_type
            )));
        }
        let mut i = 1;
        let mut best = self.member_at(i).r;
        for _ in 0..WALK_LIMIT {
            let left = self.member_at(i - 1).r;
            let right = self.member_at(i + 1).r;
            if left < best {
                best = left;
                i -= 1;
            } else if right < best {
                best = right;
                i += 1;
            } else {
                return Ok(best);
            }
        }
        Err(Error::PreconditionViolated("rank walk did not terminate".into()))
    }
}

fn signed_at(base: &(MukaiVector, MukaiVector), h: &BigInt, i: i64) -> MukaiVector {
    match i {
        1 => base.0.clone(),
        2 => base.1.clone(),
        i if i > 2 => {
            let mut walk = SignedWalk { prev: base.0.clone(), cur: base.1.clone(), h: h.clone() };
            let mut out = walk.cur.clone();
            for _ in 2..i {
                out = walk.step();
            }
            out
        }
        _ => {
            let mut walk = SignedWalk { prev: base.1.clone(), cur: base.0.clone(), h: h.clone() };
            let mut out = walk.cur.clone();
            for _ in i..1 {
                out = walk.step();
            }
            out
        }
    }
}

/// The smaller root `(h - sqrt(h^2 - 4)) / 2` of `x^2 - h x + 1 = 0`.
pub fn xh(h: &BigInt) -> Result<QuadraticNumber> {
    if *h <= BigInt::from(2) {
        return Err(Error::InvalidH(h.clone()));
    }
    let disc = h * h - 4;
    QuadraticNumber::new(
        Rational::new(h.clone(), BigInt::from(2)),
        Rational::new(-BigInt::one(), BigInt::from(2)),
        disc,
    )
}

fn require_exceptional_pair(
    surface: &SurfaceModel,
    v1: &MukaiVector,
    v2: &MukaiVector,
) -> Result<crate::mutation::PairClassification> {
    let class = classify_pair(surface, v1, v2)?;
    if !class.is_numerically_exceptional_pair {
        return Err(Error::NotExceptionalPair(format!("({v1}, {v2})")));
    }
    Ok(class)
}

/// Plus/minus verdict for `h >= 2`, and the position of the ext pair.
pub fn classify_system(surface: &SurfaceModel, v1: &MukaiVector, v2: &MukaiVector) -> Result<SystemClass> {
    let class = require_exceptional_pair(surface, v1, v2)?;
    let h = class.h.clone();
    if h < BigInt::from(2) {
        return Err(Error::InvalidH(h));
    }
    if class.pair_type == PairType::Ext {
        return Ok(SystemClass { system_type: SystemType::Minus, ext_pair_index: Some(1) });
    }
    let (r1, r2) = (v1.r.abs(), v2.r.abs());
    let plus = if h == BigInt::from(2) {
        r1 == r2
    } else {
        // r1^2 + r2^2 - h r1 r2 is never zero for h > 2
        (&r1 * &r1 + &r2 * &r2 - &h * &r1 * &r2).is_negative()
    };
    if plus {
        return Ok(SystemClass { system_type: SystemType::Plus, ext_pair_index: None });
    }
    // The signed rank sequence is strictly monotone and changes sign once;
    // walk towards the side where it decreases.
    let base = (v1.clone(), v2.clone());
    let (start, step): (i64, i64) = if r2 > r1 { (0, -1) } else { (2, 1) };
    let mut walk = if step < 0 {
        SignedWalk { prev: base.1.clone(), cur: base.0.clone(), h: h.clone() }
    } else {
        SignedWalk { prev: base.0.clone(), cur: base.1.clone(), h: h.clone() }
    };
    // `walk.cur` is w_{start+1} when walking left, w_{start} when walking right
    let mut p = start;
    for _ in 0..WALK_LIMIT {
        let next = walk.step();
        let (a, b) = if step < 0 { (next.clone(), walk.prev.clone()) } else { (walk.prev.clone(), next.clone()) };
        let (_, a) = normalize(surface, &a);
        let (_, b) = normalize(surface, &b);
        if surface.euler_minus(&a, &b)?.is_negative() {
            return Ok(SystemClass { system_type: SystemType::Minus, ext_pair_index: Some(p) });
        }
        p += step;
    }
    Err(Error::PreconditionViolated("ext pair search did not terminate".into()))
}

fn build(
    surface: &SurfaceModel,
    w1: &MukaiVector,
    w2: &MukaiVector,
    h: &BigInt,
    lo: i64,
    hi: i64,
) -> Result<PairSystem> {
    if lo > 0 || hi < 3 {
        return Err(Error::InvalidWindow { lo, hi });
    }
    let len = (hi - lo + 1) as usize;
    let mut signed = vec![MukaiVector::zero(surface.basis_rank()); len];
    let at = |i: i64| (i - lo) as usize;
    signed[at(1)] = w1.clone();
    signed[at(2)] = w2.clone();
    for i in 3..=hi {
        signed[at(i)] = &signed[at(i - 1)].scale(h) - &signed[at(i - 2)];
    }
    for i in (lo..=0).rev() {
        signed[at(i)] = &signed[at(i + 1)].scale(h) - &signed[at(i + 2)];
    }
    let (signs, members): (Vec<i8>, Vec<MukaiVector>) = signed.iter().map(|w| normalize(surface, w)).unzip();
    Ok(PairSystem {
        surface: surface.clone(),
        lo,
        hi,
        base: (w1.clone(), w2.clone()),
        signed,
        members,
        signs,
        h: h.clone(),
        system_type: SystemType::H0Alternating,
        ext_pair_index: None,
        mu_limits: None,
    })
}

/// Materialises the system generated by `(v1, v2)` on `[lo, hi]`, with
/// `E_1 = v1` and `E_2 = v2`.
pub fn generate_system(
    surface: &SurfaceModel,
    v1: &MukaiVector,
    v2: &MukaiVector,
    lo: i64,
    hi: i64,
) -> Result<PairSystem> {
    if lo > 0 || hi < 3 {
        return Err(Error::InvalidWindow { lo, hi });
    }
    let class = require_exceptional_pair(surface, v1, v2)?;
    let h = class.h.clone();
    // w_2 = sgn(E_1, E_2) v_2; a zero pair keeps its sign
    let w2 = if class.pair_type == PairType::Ext { -v2 } else { v2.clone() };
    let mut system = build(surface, v1, &w2, &h, lo, hi)?;
    if h.is_zero() {
        system.system_type = SystemType::H0Alternating;
    } else if h.is_one() {
        system.system_type = SystemType::H1Periodic;
    } else {
        let e1 = system.member(1).clone();
        let e2 = system.member(2).clone();
        let sc = classify_system(surface, &e1, &e2)?;
        system.system_type = sc.system_type;
        system.ext_pair_index = sc.ext_pair_index;
        if h > BigInt::from(2) {
            system.mu_limits = Some(system.mu_limits_at(1)?);
        }
    }
    Ok(system)
}

/// Limits of the slope sequence for `h > 2`.
pub fn mu_limits(system: &PairSystem) -> Result<MuLimits> {
    match system.mu_limits() {
        Some(l) => Ok(l.clone()),
        None => Err(Error::NoLimits(system.h().clone())),
    }
}

/// Approximate slope `d_i / r_i` as a float, for cross-checks.
pub fn float_slope(system: &PairSystem, i: i64) -> Option<f64> {
    let w = system.signed_member_at(i);
    let d = system.surface().degree_of(&w).ok()?;
    let r = w.r.to_f64()?;
    if r == 0.0 {
        return None;
    }
    Some(d.to_f64()? / r)
}
