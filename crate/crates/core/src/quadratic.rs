//! Exact numbers `a + b sqrt(D)` with rational `a`, `b`.
//!
//! The discriminant is not reduced to its square-free part, so two numbers
//! are only comparable (or structurally equal) when they share `D`. Every
//! system fixes one `D = h^2 - 4`, which is all the callers need.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    disc: BigInt,
}

impl QuadraticNumber {
    /// `disc` must be positive and not a perfect square.
    pub fn new(a: Rational, b: Rational, disc: BigInt) -> Result<Self> {
        if !disc.is_positive() {
            return Err(Error::InvalidInput(format!("discriminant {disc} is not positive")));
        }
        let root = disc.sqrt();
        if &root * &root == disc {
            return Err(Error::InvalidInput(format!("discriminant {disc} is a perfect square")));
        }
        Ok(QuadraticNumber { a, b, disc })
    }

    pub fn from_rational(a: Rational, disc: BigInt) -> Result<Self> {
        Self::new(a, Rational::zero(), disc)
    }

    /// `sqrt(disc)` itself.
    pub fn sqrt(disc: BigInt) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), disc)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn with(&self, a: Rational, b: Rational) -> Self {
        QuadraticNumber { a, b, disc: self.disc.clone() }
    }

    fn assert_same_disc(&self, other: &Self) {
        assert_eq!(self.disc, other.disc, "quadratic numbers over different discriminants");
    }

    pub fn conjugate(&self) -> Self {
        self.with(self.a.clone(), -&self.b)
    }

    /// `a^2 - b^2 D`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.disc.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign, decided by comparing `a^2` with `b^2 D` when `a` and `b`
    /// have opposite signs.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (Ordering::Greater, _) => {
                // a > 0 > b: sign of a^2 - b^2 D
                self.norm().cmp(&Rational::zero())
            }
            _ => {
                // a < 0 < b: sign of b^2 D - a^2
                Rational::zero().cmp(&self.norm())
            }
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.with(&self.a - r, self.b.clone()).signum()
    }

    /// `None` when the discriminants differ.
    pub fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.disc != other.disc {
            return None;
        }
        Some((self - other).signum())
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        self.with(&self.a + r, self.b.clone())
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.with(&self.a * r, &self.b * r)
    }

    /// `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // nonzero since D is not a square
        let n = self.norm();
        Some(self.with(&self.a / &n, -&self.b / &n))
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.disc.to_f64().unwrap_or(f64::INFINITY).sqrt();
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * d
    }

    /// Exact `floor`.
    pub fn floor(&self) -> BigInt {
        let t = floor_b_sqrt_d(&self.b, &self.disc);
        let base = self.a.floor().to_integer() + t;
        let candidate = &base + BigInt::one();
        if self.cmp_rational(&Rational::from_integer(candidate.clone())) != Ordering::Less {
            candidate
        } else {
            base
        }
    }

    /// Decimal rendering with `digits` significant digits, rounded half to
    /// even. Computed exactly, so all printed digits are correct.
    pub fn to_decimal(&self, digits: usize) -> String {
        assert!(digits > 0);
        let sign = self.signum();
        if sign == Ordering::Equal {
            return "0".to_string();
        }
        let x = if sign == Ordering::Less { -self } else { self.clone() };
        let ten = BigInt::from(10);
        let pow10 = |e: i64| -> Rational {
            if e >= 0 {
                Rational::from_integer(num_traits::pow(ten.clone(), e as usize))
            } else {
                Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
            }
        };
        let mut e = x.to_f64().log10().floor();
        if !e.is_finite() {
            e = 0.0;
        }
        let mut e = e as i64;
        while x.cmp_rational(&pow10(e)) == Ordering::Less {
            e -= 1;
        }
        while x.cmp_rational(&pow10(e + 1)) != Ordering::Less {
            e += 1;
        }
        let scaled = x.mul_rational(&pow10(digits as i64 - 1 - e));
        let mut n = scaled.floor();
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let rem = scaled.add_rational(&-Rational::from_integer(n.clone()));
        match rem.cmp_rational(&half) {
            Ordering::Greater => n += 1,
            Ordering::Equal if n.is_odd() => n += 1,
            _ => {}
        }
        if n == num_traits::pow(ten.clone(), digits) {
            n /= &ten;
            e += 1;
        }
        let body = n.to_string();
        let mut out = String::new();
        if sign == Ordering::Less {
            out.push('-');
        }
        if e >= digits as i64 - 1 {
            out.push_str(&body);
            out.extend(std::iter::repeat_n('0', (e - (digits as i64 - 1)) as usize));
        } else if e >= 0 {
            let split = (e + 1) as usize;
            out.push_str(&body[..split]);
            out.push('.');
            out.push_str(&body[split..]);
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-e - 1) as usize));
            out.push_str(&body);
        }
        out
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// `floor(b sqrt(D))` for `D > 0`.
fn floor_b_sqrt_d(b: &Rational, disc: &BigInt) -> BigInt {
    if b.is_zero() {
        return BigInt::zero();
    }
    // (b sqrt D)^2 = p/q with q > 0; floor(sqrt(p/q)) = floor(isqrt(p q) / q)
    let sq = b * b * Rational::from_integer(disc.clone());
    let (p, q) = (sq.numer().clone(), sq.denom().clone());
    let prod = &p * &q;
    let root = prod.sqrt();
    let fl = root.div_floor(&q);
    if b.is_positive() {
        fl
    } else {
        let exact = Rational::from_integer(&fl * &fl) == sq;
        if exact {
            -fl
        } else {
            -fl - 1
        }
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other)
    }
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.assert_same_disc(rhs);
        self.with(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.assert_same_disc(rhs);
        self.with(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self.assert_same_disc(rhs);
        let d = Rational::from_integer(self.disc.clone());
        self.with(&self.a * &rhs.a + &self.b * &rhs.b * d, &self.a * &rhs.b + &self.b * &rhs.a)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn div(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let inv = rhs.inverse().expect("division by zero quadratic number");
        self * &inv
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        self.with(-&self.a, -&self.b)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.disc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }
    fn q(a: Rational, b: Rational, d: i64) -> QuadraticNumber {
        QuadraticNumber::new(a, b, BigInt::from(d)).unwrap()
    }

    #[test]
    fn rejects_square_discriminants() {
        assert!(QuadraticNumber::sqrt(BigInt::from(9)).is_err());
        assert!(QuadraticNumber::sqrt(BigInt::from(0)).is_err());
        assert!(QuadraticNumber::sqrt(BigInt::from(12)).is_ok());
    }

    #[test]
    fn sign_near_cancellation() {
        // 5 sqrt(2) = 7.0710...
        assert_eq!(q(rat(7, 1), rat(-5, 1), 2).signum(), Ordering::Less);
        assert_eq!(q(rat(-7, 1), rat(5, 1), 2).signum(), Ordering::Greater);
        // 99 - 70 sqrt 2 > 0 (tiny)
        assert_eq!(q(rat(99, 1), rat(-70, 1), 2).signum(), Ordering::Greater);
        assert_eq!(q(rat(0, 1), rat(0, 1), 2).signum(), Ordering::Equal);
    }

    #[test]
    fn field_operations() {
        let x = q(rat(3, 2), rat(-1, 2), 5);
        let y = &x * &x;
        // x^2 - 3x + 1 = 0
        let z = &(&y - &x.mul_rational(&rat(3, 1))).add_rational(&rat(1, 1));
        assert!(z.is_zero());
        let inv = x.inverse().unwrap();
        // roots multiply to 1, so 1/x is the conjugate root
        assert_eq!(inv, q(rat(3, 2), rat(1, 2), 5));
        assert_eq!(&(&x / &x), &q(rat(1, 1), rat(0, 1), 5));
    }

    #[test]
    fn floor_is_exact() {
        assert_eq!(q(rat(0, 1), rat(1, 1), 2).floor(), BigInt::from(1));
        assert_eq!(q(rat(0, 1), rat(-1, 1), 2).floor(), BigInt::from(-2));
        assert_eq!(q(rat(99, 1), rat(-70, 1), 2).floor(), BigInt::from(0));
        assert_eq!(q(rat(-3, 2), rat(-3, 2), 5).floor(), BigInt::from(-5));
        assert_eq!(q(rat(5, 3), rat(0, 1), 2).floor(), BigInt::from(1));
    }

    #[test]
    fn decimal_rendering() {
        let phi_like = q(rat(-3, 2), rat(3, 2), 5);
        assert_eq!(phi_like.to_decimal(30), "1.85410196624968454461376050310");
        let neg = q(rat(-3, 2), rat(-3, 2), 5);
        assert_eq!(neg.to_decimal(30), "-4.85410196624968454461376050310");
        assert_eq!(q(rat(0, 1), rat(1, 1), 2).to_decimal(5), "1.4142");
        assert_eq!(q(rat(0, 1), rat(1, 100), 2).to_decimal(3), "0.0141");
        assert_eq!(q(rat(1000, 1), rat(0, 1), 2).to_decimal(2), "1000");
        // half-even on rational ties
        assert_eq!(q(rat(25, 10), rat(0, 1), 2).to_decimal(1), "2");
        assert_eq!(q(rat(35, 10), rat(0, 1), 2).to_decimal(1), "4");
        // carry into a new digit
        assert_eq!(q(rat(9999, 1000), rat(0, 1), 2).to_decimal(3), "10.0");
    }

    #[test]
    fn different_discriminants_are_incomparable() {
        let a = q(rat(0, 1), rat(1, 1), 12);
        let b = q(rat(0, 1), rat(2, 1), 3);
        assert_eq!(a.partial_cmp(&b), None);
    }
}
