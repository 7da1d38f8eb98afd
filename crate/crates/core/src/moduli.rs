//! Hypotheses of the comparison between moduli of semistable sheaves and
//! Kronecker moduli `N(h, m, n)`, checked numerically for a full exceptional
//! collection `(E_1, E_2, F_2, ..., F_l)` and a candidate Mukai vector `v`.
//!
//! Fullness is tested numerically only: the members must form a Z-basis of
//! the Mukai lattice. Stability of the evaluation modules `ev_{E_1,E_2,x}`
//! cannot be decided from lattice data; the report carries an explicit
//! assumption instead, together with the rank-one sufficient condition.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{MukaiVector, SurfaceModel};
use crate::mutation::PairType;
use crate::quadratic::QuadraticNumber;
use crate::system::{generate_system, xh, MuLimits, PairSystem, SystemType};
use crate::Rational;

const WALK_LIMIT: usize = 1 << 16;

/// An ordered collection `(E_1, E_2, F_2, ..., F_l)` of bundle classes that
/// is numerically exceptional and numerically full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullCollection {
    surface: SurfaceModel,
    e1: MukaiVector,
    e2: MukaiVector,
    fs: Vec<MukaiVector>,
}

impl FullCollection {
    pub fn new(surface: SurfaceModel, e1: MukaiVector, e2: MukaiVector, fs: Vec<MukaiVector>) -> Result<Self> {
        let expected = surface.mukai_rank();
        if fs.len() + 2 != expected {
            return Err(Error::InvalidCollection(format!(
                "a full collection on this surface has {expected} members, got {}",
                fs.len() + 2
            )));
        }
        let coll = FullCollection { surface, e1, e2, fs };
        let members = coll.members();
        for (i, v) in members.iter().enumerate() {
            coll.surface.check_parity(v)?;
            if !coll.surface.is_numerically_exceptional(v) {
                return Err(Error::InvalidCollection(format!("member {i} = {v} has chi(v, v) != 1")));
            }
            if !v.r.is_positive() {
                return Err(Error::InvalidCollection(format!("member {i} = {v} is not a bundle class (rank <= 0)")));
            }
        }
        for j in 0..members.len() {
            for k in j + 1..members.len() {
                let back = coll.surface.euler(members[k], members[j])?;
                if !back.is_zero() {
                    return Err(Error::InvalidCollection(format!("chi(member {k}, member {j}) = {back}, expected 0")));
                }
            }
        }
        let rows = members.iter().map(|v| coordinates(&coll.surface, v)).collect::<Result<Vec<_>>>()?;
        let det = integer_det(&rows);
        if det.abs() != BigInt::one() {
            return Err(Error::NotFull(format!("members span a sublattice of index {}", det.abs())));
        }
        Ok(coll)
    }

    pub fn surface(&self) -> &SurfaceModel {
        &self.surface
    }

    pub fn e1(&self) -> &MukaiVector {
        &self.e1
    }

    pub fn e2(&self) -> &MukaiVector {
        &self.e2
    }

    pub fn fs(&self) -> &[MukaiVector] {
        &self.fs
    }

    pub fn members(&self) -> Vec<&MukaiVector> {
        let mut out = vec![&self.e1, &self.e2];
        out.extend(self.fs.iter());
        out
    }

    /// The system generated by `(E_1, E_2)` on the default window.
    pub fn system(&self) -> Result<PairSystem> {
        let (lo, hi) = PairSystem::DEFAULT_WINDOW;
        generate_system(&self.surface, &self.e1, &self.e2, lo, hi)
    }
}

/// `(r, c_1, (s + c_1.(-K)) / 2)`: linear, and unlike `(r, c_1, s)` these
/// coordinates identify the parity-valid vectors with all of `Z^{n+2}`.
fn coordinates(surface: &SurfaceModel, v: &MukaiVector) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(v.c1.len() + 2);
    out.push(v.r.clone());
    out.extend(v.c1.coords().iter().cloned());
    surface.check_parity(v)?;
    out.push((&v.s + surface.degree_of(v)?) / 2);
    Ok(out)
}

fn integer_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<Rational>> =
        rows.iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det.to_integer()
}

/// Solves `M x = b` over Q where the columns of `M` are `cols`.
fn solve(cols: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<Rational>> {
    let n = cols.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| Rational::from_integer(c[i].clone())).collect();
            row.push(Rational::from_integer(b[i].clone()));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let piv = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in k..=n {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Evaluated condition with the inequality it was decided on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub detail: String,
}

impl Verdict {
    fn new(holds: bool, detail: impl Into<String>) -> Self {
        Verdict { holds, detail: detail.into() }
    }
}

/// `a/b < c/d` by cross-multiplication; `None` when a denominator is zero.
fn ratio_lt(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Option<bool> {
    if b.is_zero() || d.is_zero() {
        return None;
    }
    let diff = a * d - c * b;
    let bd_positive = (b * d).is_positive();
    Some(if bd_positive { diff.is_negative() } else { diff.is_positive() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conditions {
    /// `chi(F_j, v) = 0` for all `j`.
    pub cond0: Verdict,
    /// `max mu(F_j) - K^2 < mu(v) < min mu(F_j)`.
    pub cond1: Verdict,
    /// `mu_{+inf} < mu(v) < mu_{-inf}`.
    pub cond2_minus: Verdict,
    /// Either branch of the plus-type slope and ratio condition.
    pub cond2_plus: Verdict,
}

/// Unique integer coordinates of `v` in the collection basis:
/// `v = m' E_1 + n' E_2 + sum beta_j F_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub m_prime: BigInt,
    pub n_prime: BigInt,
    pub betas: Vec<BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResolutionShape {
    /// `0 -> E_1^m -> E_2^n -> V -> 0`
    R,
    /// `0 -> V -> E_1^m -> E_2^n -> 0`
    L,
    /// `0 -> E_2^n -> V -> E_1^m -> 0`
    E,
    /// `mu(v) = mu(E_i)`, so `V` is a multiple of `E_i`.
    DegenerateSlopeMatch { index: i64 },
}

impl ResolutionShape {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResolutionShape::R => "r",
            ResolutionShape::L => "l",
            ResolutionShape::E => "e",
            ResolutionShape::DegenerateSlopeMatch { .. } => "degenerate-slope-match",
        }
    }
}

impl fmt::Display for ResolutionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremApplies {
    /// Minus-type system: `N(h, m, n)` is the moduli space of semistable
    /// sheaves with vector `v`.
    MinusType,
    /// Plus-type system: the same conclusion, given stability of the
    /// evaluation modules at every point (an assumption, not checked).
    PlusTypeGivenEvStability,
    None,
}

impl TheoremApplies {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremApplies::MinusType => "minus-type",
            TheoremApplies::PlusTypeGivenEvStability => "plus-type-given-ev-stability",
            TheoremApplies::None => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionPositivity {
    /// `hmn - m^2 - n^2 + 1 > 0`
    pub dim_positive: bool,
    /// Slope window for the system type.
    pub slope_window_holds: bool,
    /// `x_h < m/n < 1/x_h`
    pub ratio_window_holds: bool,
    /// `x_h < -+m'/n' < 1/x_h`, the ratio before absolute values are taken
    /// (minus sign for a hom pair `(E_1, E_2)`).
    pub signed_ratio_window_holds: bool,
}

impl DimensionPositivity {
    pub fn is_consistent(&self) -> bool {
        self.dim_positive == self.slope_window_holds && self.dim_positive == self.ratio_window_holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub conditions: Conditions,
    pub system_type: SystemType,
    pub ext_pair_index: Option<i64>,
    pub h: BigInt,
    pub mu_v: Rational,
    pub mu_limits: MuLimits,
    /// `chi(E_3, v)` and `chi(E_2, v)` before absolute values.
    pub chi_e3_v: BigInt,
    pub chi_e2_v: BigInt,
    pub m: BigInt,
    pub n: BigInt,
    pub decomposition: Decomposition,
    pub dim_n: BigInt,
    pub shape: Option<ResolutionShape>,
    /// For shape `r`: `C^m = Hom(E_3, V)`, `C^n = Hom(E_2, V)`.
    pub shape_reading: Option<String>,
    pub applies: TheoremApplies,
    /// Rank-one member present (plus type only): sufficient for stability
    /// of the evaluation modules. `false` means unknown.
    pub ev_hint: Option<bool>,
}

/// `hmn - m^2 - n^2 + 1`; may be negative.
pub fn kronecker_dimension(h: &BigInt, m: &BigInt, n: &BigInt) -> BigInt {
    h * m * n - m * m - n * n + 1
}

struct Context {
    system: PairSystem,
    limits: MuLimits,
    mu_v: Rational,
}

fn context(coll: &FullCollection, v: &MukaiVector) -> Result<Context> {
    let s = coll.surface();
    s.check_parity(v)?;
    if !v.r.is_positive() {
        return Err(Error::InvalidCandidate(format!("rank of {v} must be positive")));
    }
    let system = coll.system()?;
    if *system.h() <= BigInt::from(2) {
        return Err(Error::TheoremOutOfScope(system.h().clone()));
    }
    let limits = crate::system::mu_limits(&system)?;
    let mu_v = s.slope(v)?;
    Ok(Context { system, limits, mu_v })
}

fn fmt_q(x: &QuadraticNumber) -> String {
    x.to_decimal(12)
}

/// Evaluates conditions (0), (1), (2-) and (2+) exactly.
pub fn check_conditions(coll: &FullCollection, v: &MukaiVector) -> Result<Conditions> {
    let ctx = context(coll, v)?;
    conditions_with(coll, v, &ctx)
}

fn conditions_with(coll: &FullCollection, v: &MukaiVector, ctx: &Context) -> Result<Conditions> {
    let s = coll.surface();
    let mut failing = Vec::new();
    for (j, f) in coll.fs().iter().enumerate() {
        let chi = s.euler(f, v)?;
        if !chi.is_zero() {
            failing.push(format!("chi(F_{}, v) = {chi} != 0", j + 2));
        }
    }
    let cond0 = if failing.is_empty() {
        Verdict::new(true, "chi(F_j, v) = 0 for all j")
    } else {
        Verdict::new(false, failing.join("; "))
    };

    let slopes: Vec<Rational> = coll.fs().iter().map(|f| s.slope(f)).collect::<Result<_>>()?;
    let max_f = slopes.iter().max().expect("nonempty").clone();
    let min_f = slopes.iter().min().expect("nonempty").clone();
    let lower = &max_f - Rational::from_integer(BigInt::from(s.degree()));
    let mu = &ctx.mu_v;
    let cond1 = if lower < *mu && *mu < min_f {
        Verdict::new(true, format!("{lower} < {mu} < {min_f}"))
    } else if lower >= *mu {
        Verdict::new(false, format!("max mu(F_j) - K^2 = {lower} < mu(v) = {mu} fails"))
    } else {
        Verdict::new(false, format!("mu(v) = {mu} < min mu(F_j) = {min_f} fails"))
    };

    let (lm, lp) = (&ctx.limits.minus_infinity, &ctx.limits.plus_infinity);
    let above_plus = lp.cmp_rational(mu) == Ordering::Less;
    let below_minus = lm.cmp_rational(mu) == Ordering::Greater;
    let cond2_minus = Verdict::new(
        above_plus && below_minus,
        format!("mu_+inf = {} < mu(v) = {mu} < mu_-inf = {}", fmt_q(lp), fmt_q(lm)),
    );

    let sys = &ctx.system;
    let chi3 = s.euler(sys.member(3), v)?;
    let chi2 = s.euler(sys.member(2), v)?;
    let (r0, r1, r2, r3) = (&sys.member(0).r, &sys.member(1).r, &sys.member(2).r, &sys.member(3).r);
    let left_ratio = ratio_lt(r3, r2, &chi3, &chi2);
    let right_ratio = ratio_lt(&chi3, &chi2, r1, r0);
    let left = below_minus && left_ratio == Some(true);
    let right = above_plus && right_ratio == Some(true);
    let show = |o: Option<bool>| match o {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "undefined",
    };
    let cond2_plus = Verdict::new(
        left || right,
        format!(
            "[mu(v) = {mu} < mu_-inf = {}: {}; r(E_3)/r(E_2) = {r3}/{r2} < chi(E_3,v)/chi(E_2,v) = {chi3}/{chi2}: {}] or \
             [mu_+inf = {} < mu(v): {}; chi(E_3,v)/chi(E_2,v) = {chi3}/{chi2} < r(E_1)/r(E_0) = {r1}/{r0}: {}]",
            fmt_q(lm),
            if below_minus { "holds" } else { "fails" },
            show(left_ratio),
            fmt_q(lp),
            if above_plus { "holds" } else { "fails" },
            show(right_ratio),
        ),
    );
    Ok(Conditions { cond0, cond1, cond2_minus, cond2_plus })
}

/// Coordinates of `v` in the basis given by the collection.
pub fn decompose(coll: &FullCollection, v: &MukaiVector) -> Result<Decomposition> {
    let s = coll.surface();
    s.check_parity(v)?;
    let cols = coll.members().iter().map(|m| coordinates(s, m)).collect::<Result<Vec<_>>>()?;
    let x = solve(&cols, &coordinates(s, v)?).ok_or_else(|| Error::NotFull("collection is not a basis".into()))?;
    if x.iter().any(|c| !c.is_integer()) {
        return Err(Error::NotFull("non-integral coordinates".into()));
    }
    let mut ints = x.into_iter().map(|c| c.to_integer());
    let m_prime = ints.next().expect("e1");
    let n_prime = ints.next().expect("e2");
    let betas: Vec<BigInt> = ints.collect();

    let cond0 = coll.fs().iter().map(|f| s.euler(f, v)).collect::<Result<Vec<_>>>()?.iter().all(Zero::is_zero);
    assert_eq!(cond0, betas.iter().all(Zero::is_zero), "beta = 0 iff chi(F_j, v) = 0");
    if cond0 {
        let (lo, hi) = PairSystem::DEFAULT_WINDOW;
        let sys = generate_system(s, coll.e1(), coll.e2(), lo, hi)?;
        let e3 = sys.member(3);
        let chi31 = s.euler(e3, coll.e1())?;
        assert_eq!(chi31.abs(), BigInt::one(), "|chi(E_3, E_1)| = 1");
        assert_eq!(m_prime, &chi31 * s.euler(e3, v)?);
        assert_eq!(n_prime, s.euler(sys.member(2), v)?);
    }
    Ok(Decomposition { m_prime, n_prime, betas })
}

/// Positivity of `dim N(h, m, n)` against the slope window and the ratio
/// window `x_h < m/n < 1/x_h`.
pub fn dimension_positivity(coll: &FullCollection, v: &MukaiVector) -> Result<DimensionPositivity> {
    let ctx = context(coll, v)?;
    let conds = conditions_with(coll, v, &ctx)?;
    if !conds.cond0.holds {
        return Err(Error::PreconditionViolated(format!("condition (0): {}", conds.cond0.detail)));
    }
    let s = coll.surface();
    let h = ctx.system.h().clone();
    let m = s.euler(ctx.system.member(3), v)?.abs();
    let n = s.euler(ctx.system.member(2), v)?.abs();
    let dim_positive = kronecker_dimension(&h, &m, &n).is_positive();

    let (lm, lp) = (&ctx.limits.minus_infinity, &ctx.limits.plus_infinity);
    let mu = &ctx.mu_v;
    let above_plus = lp.cmp_rational(mu) == Ordering::Less;
    let below_minus = lm.cmp_rational(mu) == Ordering::Greater;
    let slope_window_holds = match ctx.system.system_type() {
        SystemType::Minus => above_plus && below_minus,
        _ => above_plus || below_minus,
    };

    let x = xh(&h)?;
    let x_inv = x.inverse().expect("x_h > 0");
    let in_window = |num: &BigInt, den: &BigInt| -> bool {
        if den.is_zero() {
            return false;
        }
        let q = Rational::new(num.clone(), den.clone());
        x.cmp_rational(&q) == Ordering::Less && x_inv.cmp_rational(&q) == Ordering::Greater
    };
    let ratio_window_holds = in_window(&m, &n);

    let d = decompose(coll, v)?;
    let hom = crate::mutation::classify_pair(s, coll.e1(), coll.e2())?.pair_type == PairType::Hom;
    let signed_num = if hom { -&d.m_prime } else { d.m_prime.clone() };
    let signed_ratio_window_holds = in_window(&signed_num, &d.n_prime);

    Ok(DimensionPositivity { dim_positive, slope_window_holds, ratio_window_holds, signed_ratio_window_holds })
}

/// Looks for `mu(E_i) = mu` along the system. Slopes converge monotonically
/// to `mu_{+inf}` to the right of the ext pair (or of `E_1` for plus type)
/// and to `mu_{-inf}` to the left, so each walk stops once it has passed
/// `mu`.
fn find_slope_match(system: &PairSystem, limits: &MuLimits, mu: &Rational) -> Result<Option<i64>> {
    let s = system.surface();
    let (up_start, down_start, pivot) = match (system.system_type(), system.ext_pair_index()) {
        (SystemType::Minus, Some(p)) => (p + 1, p - 1, Some(p)),
        _ => (1, 0, None),
    };
    if let Some(p) = pivot {
        let ep = system.member_at(p);
        if ep.r.is_positive() && s.slope(&ep)? == *mu {
            return Ok(Some(p));
        }
    }
    if limits.plus_infinity.cmp_rational(mu) == Ordering::Greater {
        let mut i = up_start;
        for _ in 0..WALK_LIMIT {
            let slope = s.slope(&system.member_at(i))?;
            match slope.cmp(mu) {
                Ordering::Equal => return Ok(Some(i)),
                Ordering::Greater => break,
                Ordering::Less => i += 1,
            }
        }
    }
    if limits.minus_infinity.cmp_rational(mu) == Ordering::Less {
        let mut i = down_start;
        for _ in 0..WALK_LIMIT {
            let slope = s.slope(&system.member_at(i))?;
            match slope.cmp(mu) {
                Ordering::Equal => return Ok(Some(i)),
                Ordering::Less => break,
                Ordering::Greater => i -= 1,
            }
        }
    }
    Ok(None)
}

/// Which of the triples `(r)`, `(l)`, `(e)` resolves a semistable sheaf with
/// vector `v`, or the degenerate case `mu(v) = mu(E_i)`.
pub fn resolution_shape(coll: &FullCollection, v: &MukaiVector) -> Result<ResolutionShape> {
    let ctx = context(coll, v)?;
    let conds = conditions_with(coll, v, &ctx)?;
    shape_with(&ctx, &conds)
}

fn shape_with(ctx: &Context, conds: &Conditions) -> Result<ResolutionShape> {
    for (name, c) in [("(0)", &conds.cond0), ("(1)", &conds.cond1)] {
        if !c.holds {
            return Err(Error::PreconditionViolated(format!("condition {name}: {}", c.detail)));
        }
    }
    if let Some(i) = find_slope_match(&ctx.system, &ctx.limits, &ctx.mu_v)? {
        return Ok(ResolutionShape::DegenerateSlopeMatch { index: i });
    }
    let mu = &ctx.mu_v;
    match ctx.system.system_type() {
        SystemType::Plus => {
            if !conds.cond2_plus.holds {
                return Err(Error::PreconditionViolated(format!("condition (2+): {}", conds.cond2_plus.detail)));
            }
            if ctx.limits.plus_infinity.cmp_rational(mu) == Ordering::Less {
                Ok(ResolutionShape::R)
            } else {
                Ok(ResolutionShape::L)
            }
        }
        SystemType::Minus => {
            if !conds.cond2_minus.holds {
                return Err(Error::PreconditionViolated(format!("condition (2-): {}", conds.cond2_minus.detail)));
            }
            let p = ctx.system.ext_pair_index().expect("minus type has an ext pair");
            Ok(match p.cmp(&1) {
                Ordering::Less => ResolutionShape::R,
                Ordering::Greater => ResolutionShape::L,
                Ordering::Equal => ResolutionShape::E,
            })
        }
        other => Err(Error::TheoremOutOfScope(BigInt::from(match other {
            SystemType::H1Periodic => 1,
            _ => 0,
        }))),
    }
}

/// A rank-one member makes every evaluation module of the system stable.
/// `false` means unknown, never unstable.
pub fn ev_stability_hint(system: &PairSystem) -> Result<bool> {
    if system.system_type() != SystemType::Plus {
        return Err(Error::NotApplicable(format!(
            "evaluation-module hint needs a plus-type system, got {}",
            system.system_type()
        )));
    }
    Ok(system.min_rank()?.is_one())
}

/// Checks `chi_-(V, V') = -det[[n', m'], [n, m]] chi_-(E_1, E_2)` for
/// `v = n E_2 - m E_1` and `v' = n' E_2 - m' E_1`, each side computed
/// independently.
pub fn cross_check_chi_minus(
    surface: &SurfaceModel,
    e1: &MukaiVector,
    e2: &MukaiVector,
    (m, n): (&BigInt, &BigInt),
    (m_sub, n_sub): (&BigInt, &BigInt),
) -> Result<bool> {
    let v = &e2.scale(n) - &e1.scale(m);
    let v_sub = &e2.scale(n_sub) - &e1.scale(m_sub);
    let lhs = surface.euler_minus(&v, &v_sub)?;
    let det = n_sub * m - m_sub * n;
    let rhs = -det * surface.euler_minus(e1, e2)?;
    Ok(lhs == rhs)
}

/// Full report: conditions, `(h, m, n)`, decomposition, `dim N`, resolution
/// shape and which comparison applies.
pub fn theorem_report(coll: &FullCollection, v: &MukaiVector) -> Result<TheoremReport> {
    let ctx = context(coll, v)?;
    let conditions = conditions_with(coll, v, &ctx)?;
    let s = coll.surface();
    let sys = &ctx.system;
    let chi_e3_v = s.euler(sys.member(3), v)?;
    let chi_e2_v = s.euler(sys.member(2), v)?;
    let (m, n) = (chi_e3_v.abs(), chi_e2_v.abs());
    let h = sys.h().clone();
    let decomposition = decompose(coll, v)?;
    let dim_n = kronecker_dimension(&h, &m, &n);
    let shape =
        if conditions.cond0.holds && conditions.cond1.holds { shape_with(&ctx, &conditions).ok() } else { None };
    let shape_reading = match shape {
        Some(ResolutionShape::R) => Some("C^m = Hom(E_3, V), C^n = Hom(E_2, V)".to_string()),
        _ => None,
    };
    let base = conditions.cond0.holds && conditions.cond1.holds;
    let applies = match sys.system_type() {
        SystemType::Minus if base && conditions.cond2_minus.holds => TheoremApplies::MinusType,
        SystemType::Plus if base && conditions.cond2_plus.holds => TheoremApplies::PlusTypeGivenEvStability,
        _ => TheoremApplies::None,
    };
    let ev_hint = match sys.system_type() {
        SystemType::Plus => Some(ev_stability_hint(sys)?),
        _ => None,
    };
    Ok(TheoremReport {
        conditions,
        system_type: sys.system_type(),
        ext_pair_index: sys.ext_pair_index(),
        h,
        mu_v: ctx.mu_v.clone(),
        mu_limits: ctx.limits.clone(),
        chi_e3_v,
        chi_e2_v,
        m,
        n,
        decomposition,
        dim_n,
        shape,
        shape_reading,
        applies,
        ev_hint,
    })
}
