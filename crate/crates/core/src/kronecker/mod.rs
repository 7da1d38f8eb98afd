//! Kronecker `L`-modules `t: H_0 (x) L -> H_1`, stored as `h = dim L`
//! matrices of shape `n x m`, and their (semi)stability.
//!
//! A module is semistable when every submodule `(H'_0, H'_1)` with
//! `H'_0 != 0` and `H'_1 != H_1` has `dim H'_1 / dim H'_0 >= n / m`, stable
//! when the inequality is always strict. For a given `H'_0` the smallest
//! admissible `H'_1` is `t(H'_0 (x) L)`, so over a finite field it is enough
//! to run through the nonzero subspaces of `H_0`. Subspaces whose image is
//! all of `H_1` constrain nothing; when every one of them does, the module
//! counts as stable.

mod census;
pub(crate) mod fp;

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Rational;

pub use census::{census, Census, DEFAULT_BUDGET};
use fp::{for_each_subspace, is_prime, Fp};

pub type Matrix = Vec<Vec<Rational>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u32),
    Rational,
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadPrime(p, "not a prime".into()));
        }
        let p32 = u32::try_from(p)
            .ok()
            .filter(|&x| x < (1 << 31))
            .ok_or_else(|| Error::BadPrime(p, "must be below 2^31".into()))?;
        Ok(Field::Prime(p32))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rational => f.write_str("Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KroneckerModule {
    h: usize,
    m: usize,
    n: usize,
    field: Field,
    mats: Vec<Matrix>,
}

fn check_shape(mats: &[Matrix], m: usize, n: usize) -> Result<()> {
    for (j, a) in mats.iter().enumerate() {
        if a.len() != n || a.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidModule(format!("matrix {j} is not {n} x {m}")));
        }
    }
    Ok(())
}

impl KroneckerModule {
    /// `mats` holds `h >= 3` matrices of shape `n x m`. Over `F_p` entries
    /// must be integers in `0..p`.
    pub fn new(field: Field, m: usize, n: usize, mats: Vec<Matrix>) -> Result<Self> {
        if mats.len() < 3 {
            return Err(Error::InvalidModule(format!("need dim L >= 3, got {}", mats.len())));
        }
        if m == 0 || n == 0 {
            return Err(Error::InvalidModule(format!("need m, n >= 1, got m = {m}, n = {n}")));
        }
        check_shape(&mats, m, n)?;
        if let Field::Prime(p) = field {
            Field::prime(u64::from(p))?;
            let bound = BigInt::from(p);
            let ok = mats
                .iter()
                .flatten()
                .flatten()
                .all(|x| x.is_integer() && !x.numer().is_negative() && *x.numer() < bound);
            if !ok {
                return Err(Error::InvalidModule(format!("entries must be integers in 0..{p}")));
            }
        }
        Ok(KroneckerModule { h: mats.len(), m, n, field, mats })
    }

    pub fn zero(h: usize, m: usize, n: usize, field: Field) -> Result<Self> {
        let mats = vec![vec![vec![Rational::zero(); m]; n]; h];
        Self::new(field, m, n, mats)
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    /// Transposes every component: shape `(h, m, n)` becomes `(h, n, m)`.
    pub fn dualize(&self) -> KroneckerModule {
        let mats = self
            .mats
            .iter()
            .map(|a| (0..self.m).map(|c| (0..self.n).map(|r| a[r][c].clone()).collect()).collect())
            .collect();
        KroneckerModule { h: self.h, m: self.n, n: self.m, field: self.field, mats }
    }

    /// Action of `(g_0, g_1) in GL(H_0) x GL(H_1)`: `A_j -> g_1 A_j g_0^{-1}`.
    pub fn transform(&self, g0: &Matrix, g1: &Matrix) -> Result<KroneckerModule> {
        check_shape(std::slice::from_ref(g0), self.m, self.m)?;
        check_shape(std::slice::from_ref(g1), self.n, self.n)?;
        let mats = match self.field {
            Field::Prime(p) => {
                let f = Fp::new(u64::from(p));
                let g0 = to_fp_matrix(g0, f)?;
                let g1 = to_fp_matrix(g1, f)?;
                let g0_inv = f.invert(&g0).ok_or_else(|| Error::InvalidModule("g0 is singular".into()))?;
                if f.invert(&g1).is_none() {
                    return Err(Error::InvalidModule("g1 is singular".into()));
                }
                self.fp_mats(f)?.iter().map(|a| from_fp_matrix(&f.matmul(&f.matmul(&g1, a), &g0_inv))).collect()
            }
            Field::Rational => {
                let g0_inv = rational_inverse(g0).ok_or_else(|| Error::InvalidModule("g0 is singular".into()))?;
                if rational_inverse(g1).is_none() {
                    return Err(Error::InvalidModule("g1 is singular".into()));
                }
                self.mats.iter().map(|a| rational_matmul(&rational_matmul(g1, a), &g0_inv)).collect()
            }
        };
        Ok(KroneckerModule { mats, ..self.clone() })
    }

    /// Entries reduced into `F_p`; fails if `p` divides a denominator.
    fn fp_mats(&self, f: Fp) -> Result<Vec<Vec<Vec<u64>>>> {
        self.mats.iter().map(|a| to_fp_matrix(a, f)).collect()
    }

    /// `dim t(W (x) L)` for the span `W` of `basis` (vectors in `H_0`),
    /// computed in the module's own field.
    pub fn image_dimension(&self, basis: &[Vec<Rational>]) -> Result<usize> {
        if basis.iter().any(|b| b.len() != self.m) {
            return Err(Error::InvalidInput(format!("basis vectors must have length {}", self.m)));
        }
        let images =
            |x: &Vec<Rational>| -> Vec<Vec<Rational>> { self.mats.iter().map(|a| rational_apply(a, x)).collect() };
        let rows: Vec<Vec<Rational>> = basis.iter().flat_map(images).collect();
        match self.field {
            Field::Prime(p) => {
                let f = Fp::new(u64::from(p));
                Ok(f.rank(rows.iter().map(|r| to_fp_row(r, f)).collect::<Result<_>>()?))
            }
            Field::Rational => Ok(rational_rank(rows)),
        }
    }

    fn basis_rank(&self, basis: &[Vec<Rational>]) -> Result<usize> {
        match self.field {
            Field::Prime(p) => {
                let f = Fp::new(u64::from(p));
                Ok(f.rank(basis.iter().map(|r| to_fp_row(r, f)).collect::<Result<_>>()?))
            }
            Field::Rational => Ok(rational_rank(basis.to_vec())),
        }
    }
}

fn reduce(x: &Rational, f: Fp) -> Result<u64> {
    let p = BigInt::from(f.p);
    let den = x.denom().mod_floor(&p);
    if den.is_zero() {
        return Err(Error::BadPrime(f.p, format!("divides the denominator of {x}")));
    }
    let num = x.numer().mod_floor(&p).to_u64().expect("below p");
    Ok(f.mul(num, f.inv(den.to_u64().expect("below p"))))
}

fn to_fp_row(row: &[Rational], f: Fp) -> Result<Vec<u64>> {
    row.iter().map(|x| reduce(x, f)).collect()
}

fn to_fp_matrix(a: &Matrix, f: Fp) -> Result<Vec<Vec<u64>>> {
    a.iter().map(|row| to_fp_row(row, f)).collect()
}

fn from_fp_matrix(a: &[Vec<u64>]) -> Matrix {
    a.iter().map(|row| row.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect()
}

fn rational_apply(a: &Matrix, x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(x).fold(Rational::zero(), |acc, (r, v)| acc + r * v)).collect()
}

fn rational_matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| row.iter().zip(b).fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])).collect()
        })
        .collect()
}

fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        for i in rank + 1..rows.len() {
            if !rows[i][col].is_zero() {
                let factor = &rows[i][col] / &rows[rank][col];
                for j in col..width {
                    let t = &factor * &rows[rank][j];
                    rows[i][j] -= t;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn rational_inverse(a: &Matrix) -> Option<Matrix> {
    let k = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..k {
            if i != col && !aug[i][col].is_zero() {
                let factor = aug[i][col].clone();
                for j in 0..2 * k {
                    let t = &factor * &aug[col][j];
                    aug[i][j] -= t;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[k..].to_vec()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabilityTag {
    Stable,
    StrictlySemistable,
    Unstable,
    /// Over Q only: semistable after reduction, stable versus strictly
    /// semistable left open.
    ProbablySemistable,
}

impl StabilityTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StabilityTag::Stable => "stable",
            StabilityTag::StrictlySemistable => "strictly-semistable",
            StabilityTag::Unstable => "unstable",
            StabilityTag::ProbablySemistable => "probably-semistable",
        }
    }

    pub fn is_semistable(self) -> bool {
        !matches!(self, StabilityTag::Unstable)
    }
}

impl fmt::Display for StabilityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A subspace `H'_0` of `H_0` with `dim t(H'_0 (x) L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub basis: Vec<Vec<Rational>>,
    pub image_dim: usize,
}

impl Witness {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub tag: StabilityTag,
    /// Present for `unstable` (a subspace of least ratio) and
    /// `strictly-semistable` (the first equality found).
    pub witness: Option<Witness>,
    pub primes: Vec<u32>,
    /// Reduction verdict per prime (over `F_p`, just `p` itself).
    pub per_prime: Vec<(u32, StabilityTag)>,
    /// Whether the tag is proven for the module's own field.
    pub certified: bool,
}

struct FpScan {
    tag: StabilityTag,
    witness: Option<(Vec<Vec<u64>>, usize)>,
}

/// Runs the subspace criterion over `F_p`. With `early_exit` the scan stops
/// at the first violation and returns no witness.
fn scan(f: Fp, m: usize, n: usize, mats: &[Vec<Vec<u64>>], early_exit: bool) -> FpScan {
    let mut worst: Option<(Vec<Vec<u64>>, usize, usize)> = None;
    let mut equal: Option<(Vec<Vec<u64>>, usize)> = None;
    for k in 1..=m {
        let flow = for_each_subspace(m, k, f.p, &mut |basis: &[Vec<u64>]| {
            let rows: Vec<Vec<u64>> = basis.iter().flat_map(|x| mats.iter().map(move |a| f.apply(a, x))).collect();
            let rho = f.rank(rows);
            if rho == n {
                return ControlFlow::Continue(());
            }
            match (rho * m).cmp(&(n * k)) {
                std::cmp::Ordering::Less => {
                    if early_exit {
                        return ControlFlow::Break(());
                    }
                    let better = worst.as_ref().is_none_or(|(_, r0, k0)| rho * k0 < r0 * k);
                    if better {
                        worst = Some((basis.to_vec(), rho, k));
                    }
                }
                std::cmp::Ordering::Equal if equal.is_none() => {
                    equal = Some((basis.to_vec(), rho));
                }
                _ => {}
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return FpScan { tag: StabilityTag::Unstable, witness: None };
        }
    }
    if let Some((b, rho, _)) = worst {
        FpScan { tag: StabilityTag::Unstable, witness: Some((b, rho)) }
    } else if let Some((b, rho)) = equal {
        FpScan { tag: StabilityTag::StrictlySemistable, witness: Some((b, rho)) }
    } else {
        FpScan { tag: StabilityTag::Stable, witness: None }
    }
}

pub(crate) fn fp_tag(f: Fp, m: usize, n: usize, mats: &[Vec<Vec<u64>>]) -> StabilityTag {
    scan(f, m, n, mats, true).tag
}

/// Exhaustive check over `F_p`.
pub fn check_stability(module: &KroneckerModule) -> Result<StabilityVerdict> {
    let Field::Prime(p) = module.field else {
        return Err(Error::InvalidInput("rational module: use check_stability_rational".into()));
    };
    let f = Fp::new(u64::from(p));
    let res = scan(f, module.m, module.n, &module.fp_mats(f)?, false);
    let witness = res.witness.map(|(b, rho)| Witness { basis: from_fp_matrix(&b), image_dim: rho });
    Ok(StabilityVerdict { tag: res.tag, witness, primes: vec![p], per_prime: vec![(p, res.tag)], certified: true })
}

/// Lifts of a finite-field vector to Z: entries in `0..p` and symmetric
/// entries in `(-p/2, p/2]`.
fn lifts(basis: &[Vec<u64>], p: u64) -> [Vec<Vec<Rational>>; 2] {
    let plain = basis.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let sym = basis
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| {
                    let v = if 2 * x > p { x as i128 - p as i128 } else { x as i128 };
                    Rational::from_integer(v.into())
                })
                .collect()
        })
        .collect();
    [plain, sym]
}

/// Transfer heuristic over Q. Each prime's reduction is checked
/// exhaustively; the Q verdict is
///
/// * `stable` (certified) if some reduction is stable: the non-stable locus
///   is closed in families over `Z_(p)`, so stability lifts;
/// * `strictly-semistable` (certified) if some reduction is semistable and an
///   equality witness re-verifies exactly over Q;
/// * `probably-semistable` if some reduction is semistable otherwise;
/// * `unstable`, certified only when a reduction witness lifts to a Q
///   subspace that violates the inequality exactly.
pub fn check_stability_rational(module: &KroneckerModule, primes: &[u32]) -> Result<StabilityVerdict> {
    if module.field != Field::Rational {
        return Err(Error::InvalidInput("finite-field module: use check_stability".into()));
    }
    let mut distinct = primes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::InvalidInput("need at least two distinct primes".into()));
    }
    let mut per_prime = Vec::new();
    let mut scans = Vec::new();
    for &p in primes {
        Field::prime(u64::from(p))?;
        let f = Fp::new(u64::from(p));
        let res = scan(f, module.m, module.n, &module.fp_mats(f)?, false);
        per_prime.push((p, res.tag));
        scans.push((p, res));
    }
    let verdict = |tag, witness, certified| StabilityVerdict {
        tag,
        witness,
        primes: primes.to_vec(),
        per_prime: per_prime.clone(),
        certified,
    };
    if per_prime.iter().any(|(_, t)| *t == StabilityTag::Stable) {
        return Ok(verdict(StabilityTag::Stable, None, true));
    }
    let (m, n) = (module.m, module.n);
    // exact re-verification of a reduction witness
    let lift = |wanted: std::cmp::Ordering| -> Result<Option<Witness>> {
        for (p, res) in &scans {
            let Some((b, _)) = &res.witness else { continue };
            for basis in lifts(b, u64::from(*p)) {
                let k = basis.len();
                if module.basis_rank(&basis)? != k {
                    continue;
                }
                let rho = module.image_dimension(&basis)?;
                if rho < n && (rho * m).cmp(&(n * k)) == wanted {
                    return Ok(Some(Witness { basis, image_dim: rho }));
                }
            }
        }
        Ok(None)
    };
    if per_prime.iter().any(|(_, t)| t.is_semistable()) {
        return Ok(match lift(std::cmp::Ordering::Equal)? {
            Some(w) => verdict(StabilityTag::StrictlySemistable, Some(w), true),
            None => verdict(StabilityTag::ProbablySemistable, None, false),
        });
    }
    Ok(match lift(std::cmp::Ordering::Less)? {
        Some(w) => verdict(StabilityTag::Unstable, Some(w), true),
        None => verdict(StabilityTag::Unstable, None, false),
    })
}

/// Deterministic random module: ChaCha8 seeded with `seed`, entries drawn
/// matrix by matrix, row-major, uniform in `0..p` over `F_p` and uniform
/// integers in `-9..=9` over Q.
pub fn random_module(h: usize, m: usize, n: usize, field: Field, seed: u64) -> Result<KroneckerModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Rational {
        let v: i64 = match field {
            Field::Prime(p) => i64::from(rng.gen_range(0..p)),
            Field::Rational => rng.gen_range(-9..=9),
        };
        Rational::from_integer(v.into())
    };
    let mats = (0..h).map(|_| (0..n).map(|_| (0..m).map(|_| draw()).collect()).collect()).collect();
    KroneckerModule::new(field, m, n, mats)
}

/// Uniformly random invertible `k x k` matrix over `F_p` (rejection
/// sampling), from ChaCha8 seeded with `seed`.
pub fn random_invertible(k: usize, p: u32, seed: u64) -> Result<Matrix> {
    Field::prime(u64::from(p))?;
    let f = Fp::new(u64::from(p));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g: Vec<Vec<u64>> = (0..k).map(|_| (0..k).map(|_| u64::from(rng.gen_range(0..p))).collect()).collect();
        if f.invert(&g).is_some() {
            return Ok(from_fp_matrix(&g));
        }
    }
}
