//! Picard lattices, Mukai vectors and the Euler form.
//!
//! A Mukai vector is stored as `(r, c1, s)` with `s = c1^2 - 2 c2`, i.e. twice
//! the usual second Chern character. With this convention every component is
//! an integer and `q = s / (2r)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Named surfaces with a fixed basis of `Pic`.
///
/// The blow-up basis is `(H, e_1, ..., e_k)` with `H^2 = 1`, `e_i^2 = -1`;
/// the quadric basis is the two rulings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfacePreset {
    ProjectivePlane,
    Blowup(u32),
    Quadric,
}

impl SurfacePreset {
    /// Parses the preset names used by the CLI: `projective-plane`,
    /// `blowup` (with `k`), `quadric`.
    pub fn from_name(kind: &str, k: Option<u32>) -> Result<Self> {
        match kind {
            "projective-plane" => Ok(SurfacePreset::ProjectivePlane),
            "blowup" => Ok(SurfacePreset::Blowup(k.unwrap_or(0))),
            "quadric" => Ok(SurfacePreset::Quadric),
            other => Err(Error::InvalidSurface(format!("unknown preset '{other}'"))),
        }
    }

    /// All shipped presets, one per distinct surface.
    pub fn all() -> Vec<SurfacePreset> {
        let mut out = vec![SurfacePreset::ProjectivePlane, SurfacePreset::Quadric];
        out.extend((1..=8).map(SurfacePreset::Blowup));
        out
    }
}

impl fmt::Display for SurfacePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfacePreset::ProjectivePlane => write!(f, "projective-plane"),
            SurfacePreset::Blowup(k) => write!(f, "blowup({k})"),
            SurfacePreset::Quadric => write!(f, "quadric"),
        }
    }
}

/// A divisor class in the chosen basis of `Pic(S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PicClass(pub Vec<BigInt>);

impl PicClass {
    pub fn zero(rank: usize) -> Self {
        PicClass(vec![BigInt::zero(); rank])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        PicClass(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn scale(&self, k: &BigInt) -> PicClass {
        PicClass(self.0.iter().map(|c| c * k).collect())
    }

    fn zip_with(&self, other: &PicClass, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> PicClass {
        assert_eq!(self.len(), other.len(), "Picard classes of different length");
        PicClass(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }
}

impl Add for &PicClass {
    type Output = PicClass;
    fn add(self, rhs: &PicClass) -> PicClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PicClass {
    type Output = PicClass;
    fn sub(self, rhs: &PicClass) -> PicClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        PicClass(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// An element of `Pic(S) (x) Q`, kept as an integral class over a positive
/// denominator (not necessarily reduced against the gcd of all coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalClass {
    pub numerator: PicClass,
    pub denominator: BigInt,
}

impl RationalClass {
    pub fn coords(&self) -> Vec<Rational> {
        self.numerator.0.iter().map(|c| Rational::new(c.clone(), self.denominator.clone())).collect()
    }
}

/// Mukai vector `(r, c1, s)` with `s = c1^2 - 2 c2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: BigInt,
    pub c1: PicClass,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, c1: PicClass, s: impl Into<BigInt>) -> Self {
        MukaiVector { r: r.into(), c1, s: s.into() }
    }

    /// Shorthand for small literal vectors.
    pub fn from_i64(r: i64, c1: &[i64], s: i64) -> Self {
        MukaiVector::new(r, PicClass::from_i64(c1), s)
    }

    pub fn zero(rank: usize) -> Self {
        MukaiVector::new(0, PicClass::zero(rank), 0)
    }

    pub fn scale(&self, k: &BigInt) -> MukaiVector {
        MukaiVector { r: &self.r * k, c1: self.c1.scale(k), s: &self.s * k }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.c1.0.iter().all(Zero::is_zero)
    }
}

impl Add for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector { r: &self.r + &rhs.r, c1: &self.c1 + &rhs.c1, s: &self.s + &rhs.s }
    }
}

impl Sub for &MukaiVector {
    type Output = MukaiVector;
    fn sub(self, rhs: &MukaiVector) -> MukaiVector {
        MukaiVector { r: &self.r - &rhs.r, c1: &self.c1 - &rhs.c1, s: &self.s - &rhs.s }
    }
}

impl Neg for &MukaiVector {
    type Output = MukaiVector;
    fn neg(self) -> MukaiVector {
        MukaiVector { r: -&self.r, c1: -&self.c1, s: -&self.s }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c1, self.s)
    }
}

/// Scalar invariants of a Mukai vector of nonzero rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    /// `c1 . (-K)`
    pub degree: BigInt,
    pub slope: Rational,
    pub q: Rational,
    pub nu: RationalClass,
}

/// Picard lattice with intersection form and canonical class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    gram: Vec<Vec<i64>>,
    canonical: Vec<i64>,
    degree: i64,
}

impl SurfaceModel {
    /// Accepts any symmetric unimodular form of signature `(1, n-1)` whose
    /// canonical vector is characteristic (`D.D = D.K mod 2` for all `D`).
    pub fn new(gram: Vec<Vec<i64>>, canonical: Vec<i64>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::InvalidSurface("empty Picard lattice".into()));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSurface("gram matrix is not square".into()));
        }
        if canonical.len() != n {
            return Err(Error::InvalidSurface(format!(
                "canonical class has {} coordinates, lattice rank is {n}",
                canonical.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidSurface("gram matrix is not symmetric".into()));
                }
            }
        }
        let det = integer_determinant(&gram);
        if det.abs() != BigInt::one() {
            return Err(Error::InvalidSurface(format!("gram determinant {det} is not +-1")));
        }
        let (pos, neg) = signature(&gram);
        if pos != 1 || neg != n - 1 {
            return Err(Error::InvalidSurface(format!("signature ({pos}, {neg}) is not (1, {})", n - 1)));
        }
        for i in 0..n {
            let ek: i64 = (0..n).map(|j| gram[i][j] * canonical[j]).sum();
            if (gram[i][i] - ek).rem_euclid(2) != 0 {
                return Err(Error::InvalidSurface(
                    "canonical class is not characteristic; Euler form would not be integral".into(),
                ));
            }
        }
        let degree = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| canonical[i] * gram[i][j] * canonical[j])
            .sum();
        Ok(SurfaceModel { gram, canonical, degree })
    }

    pub fn preset(kind: SurfacePreset) -> Result<Self> {
        match kind {
            SurfacePreset::ProjectivePlane => Self::new(vec![vec![1]], vec![-3]),
            SurfacePreset::Quadric => Self::new(vec![vec![0, 1], vec![1, 0]], vec![-2, -2]),
            SurfacePreset::Blowup(k) => {
                if k > 8 {
                    return Err(Error::InvalidSurface(format!("blow-up count {k} outside [0, 8]")));
                }
                let n = 1 + k as usize;
                let gram = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if i != j {
                                    0
                                } else if i == 0 {
                                    1
                                } else {
                                    -1
                                }
                            })
                            .collect()
                    })
                    .collect();
                let mut canonical = vec![1; n];
                canonical[0] = -3;
                Self::new(gram, canonical)
            }
        }
    }

    pub fn basis_rank(&self) -> usize {
        self.gram.len()
    }

    /// Rank of the Mukai lattice `Z + Pic + Z`.
    pub fn mukai_rank(&self) -> usize {
        self.gram.len() + 2
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &[i64] {
        &self.canonical
    }

    /// `K^2`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn canonical_class(&self) -> PicClass {
        PicClass::from_i64(&self.canonical)
    }

    fn check_len(&self, a: &PicClass) -> Result<()> {
        if a.len() != self.basis_rank() {
            return Err(Error::InvalidInput(format!(
                "class {a} has {} coordinates, lattice rank is {}",
                a.len(),
                self.basis_rank()
            )));
        }
        Ok(())
    }

    fn check_vector(&self, v: &MukaiVector) -> Result<()> {
        self.check_len(&v.c1)
    }

    /// `a^T . gram . b`
    pub fn intersect(&self, a: &PicClass, b: &PicClass) -> Result<BigInt> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.pair_unchecked(a, b))
    }

    fn pair_unchecked(&self, a: &PicClass, b: &PicClass) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if a.0[i].is_zero() {
                continue;
            }
            let mut inner = BigInt::zero();
            for (j, &g) in row.iter().enumerate() {
                if g != 0 {
                    inner += &b.0[j] * g;
                }
            }
            acc += &a.0[i] * inner;
        }
        acc
    }

    /// `c1 . (-K)`, defined at every rank.
    pub fn degree_of(&self, v: &MukaiVector) -> Result<BigInt> {
        self.check_vector(v)?;
        Ok(self.anticanonical_degree_unchecked(&v.c1))
    }

    fn anticanonical_degree_unchecked(&self, c: &PicClass) -> BigInt {
        -self.pair_unchecked(c, &self.canonical_class())
    }

    /// `s = c1^2 mod 2`, forced by `s = c1^2 - 2 c2`.
    pub fn is_parity_valid(&self, v: &MukaiVector) -> bool {
        self.check_vector(v).is_ok() && (&v.s - self.pair_unchecked(&v.c1, &v.c1)).is_even()
    }

    pub fn check_parity(&self, v: &MukaiVector) -> Result<()> {
        self.check_vector(v)?;
        if !self.is_parity_valid(v) {
            let c2 = self.pair_unchecked(&v.c1, &v.c1);
            return Err(Error::InvalidMukaiVector {
                reason: format!("parity violated for {v}: s = {} but c1^2 = {c2}", v.s),
                twice_value: self.twice_euler(v, v),
            });
        }
        Ok(())
    }

    pub fn slope(&self, v: &MukaiVector) -> Result<Rational> {
        let d = self.degree_of(v)?;
        if v.r.is_zero() {
            return Err(Error::RankZero { degree: d });
        }
        Ok(Rational::new(d, v.r.clone()))
    }

    pub fn q(&self, v: &MukaiVector) -> Result<Rational> {
        let d = self.degree_of(v)?;
        if v.r.is_zero() {
            return Err(Error::RankZero { degree: d });
        }
        Ok(Rational::new(v.s.clone(), &v.r * 2))
    }

    pub fn nu(&self, v: &MukaiVector) -> Result<RationalClass> {
        let d = self.degree_of(v)?;
        if v.r.is_zero() {
            return Err(Error::RankZero { degree: d });
        }
        // keep the denominator positive
        let (numerator, denominator) = if v.r.is_negative() { (-&v.c1, -&v.r) } else { (v.c1.clone(), v.r.clone()) };
        Ok(RationalClass { numerator, denominator })
    }

    pub fn invariants(&self, v: &MukaiVector) -> Result<Invariants> {
        Ok(Invariants { degree: self.degree_of(v)?, slope: self.slope(v)?, q: self.q(v)?, nu: self.nu(v)? })
    }

    /// `2 chi(v, w)` in the expanded form
    /// `2 r_v r_w + (r_v d_w - r_w d_v) + (r_v s_w + r_w s_v) - 2 c_v.c_w`,
    /// which stays meaningful at rank zero.
    fn twice_euler(&self, v: &MukaiVector, w: &MukaiVector) -> BigInt {
        let dv = self.anticanonical_degree_unchecked(&v.c1);
        let dw = self.anticanonical_degree_unchecked(&w.c1);
        let cc = self.pair_unchecked(&v.c1, &w.c1);
        BigInt::from(2) * &v.r * &w.r + (&v.r * dw - &w.r * dv) + (&v.r * &w.s + &w.r * &v.s) - cc * 2
    }

    /// The Euler form `chi(v, w)` from Riemann-Roch.
    pub fn euler(&self, v: &MukaiVector, w: &MukaiVector) -> Result<BigInt> {
        self.check_parity(v)?;
        self.check_parity(w)?;
        let twice = self.twice_euler(v, w);
        if twice.is_odd() {
            return Err(Error::InvalidMukaiVector {
                reason: format!("chi({v}, {w}) is a half-integer"),
                twice_value: twice,
            });
        }
        Ok(twice / 2)
    }

    /// Skew part `chi(v, w) - chi(w, v) = d_w r_v - r_w d_v`.
    pub fn euler_minus(&self, v: &MukaiVector, w: &MukaiVector) -> Result<BigInt> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        let dv = self.anticanonical_degree_unchecked(&v.c1);
        let dw = self.anticanonical_degree_unchecked(&w.c1);
        Ok(dw * &v.r - &w.r * dv)
    }

    /// `chi(v, v) = r^2 + r s - c1^2 = 1` for a parity-valid `v`.
    ///
    /// Necessary but not sufficient for `v` to be the class of an
    /// exceptional sheaf.
    pub fn is_numerically_exceptional(&self, v: &MukaiVector) -> bool {
        if !self.is_parity_valid(v) {
            return false;
        }
        let c2 = self.pair_unchecked(&v.c1, &v.c1);
        &v.r * &v.r + &v.r * &v.s - c2 == BigInt::one()
    }

    /// Builds `(r, c1, c1^2 - 2 c2)` from classical Chern data.
    pub fn mukai_from_chern(&self, r: BigInt, c1: PicClass, c2: BigInt) -> Result<MukaiVector> {
        let sq = self.intersect(&c1, &c1)?;
        Ok(MukaiVector { r, s: sq - c2 * 2, c1 })
    }

    /// Recovers `c2 = (c1^2 - s) / 2`; requires parity.
    pub fn chern_c2(&self, v: &MukaiVector) -> Result<BigInt> {
        self.check_parity(v)?;
        Ok((self.pair_unchecked(&v.c1, &v.c1) - &v.s) / 2)
    }
}

/// Bareiss fraction-free elimination.
fn integer_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = val;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Counts of positive and negative squares via congruence diagonalisation
/// over the rationals.
fn signature(m: &[Vec<i64>]) -> (usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> =
        m.iter().map(|row| row.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(i, k);
                for row in a.iter_mut() {
                    row.swap(i, k);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k <- e_k + e_j gives a nonzero diagonal 2 a_kj + a_jj
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let factor = &a[i][k] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &factor * &a[k][j];
                a[i][j] -= v;
            }
            for r in k..n {
                let v = &factor * &a[r][k];
                a[r][i] -= v;
            }
        }
    }
    (pos, neg)
}
