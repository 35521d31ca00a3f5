//! Scalar fields: an exact rational type and plain `f64`.
//!
//! [`Rational`] keeps small values in a machine-word ratio and only falls
//! back to big integers when a checked operation overflows. The canonical
//! form (reduced, positive denominator, small whenever it fits) makes
//! structural equality coincide with numeric equality.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arithmetic needed by the tensor engine.
///
/// Implemented for [`Rational`] (exact) and `f64` (float mode).
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    /// `true` for exact fields; float fields use tolerances instead.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Field division; division by zero is an error.
    fn checked_div(&self, rhs: &Self) -> Result<Self, Error>;
    /// Square root if it exists in the field (always for non-negative floats).
    fn sqrt_exact(&self) -> Option<Self>;

    /// `self += a * b` without cloning the operands twice.
    fn add_prod(&mut self, a: &Self, b: &Self) {
        *self += a.clone() * b.clone();
    }

    /// `self -= a * b`.
    fn sub_prod(&mut self, a: &Self, b: &Self) {
        *self -= a.clone() * b.clone();
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num)
            .checked_div(&Self::from_i64(den))
            .expect("from_ratio with zero denominator")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

/// Exact rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        if num == i64::MIN || den == i64::MIN {
            return Ok(Self::from_big(BigRational::new(num.into(), den.into())));
        }
        Ok(Rational(Repr::Small(Ratio::new(num, den))))
    }

    pub fn integer(v: i64) -> Self {
        Rational(Repr::Small(Ratio::from_integer(v)))
    }

    /// Canonicalize a big ratio, demoting it when both parts fit in `i64`.
    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Rational(Repr::Small(Ratio::new_raw(n, d)))
            }
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw((*r.numer()).into(), (*r.denom()).into()),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => (*r.numer()).into(),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => (*r.denom()).into(),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Rational::integer(1);
        for _ in 0..e {
            out *= self.clone();
        }
        out
    }

    fn binop(
        &self,
        rhs: &Self,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = small(a, b) {
                return Rational(Repr::Small(r));
            }
        }
        Self::from_big(big(self.to_big(), rhs.to_big()))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::integer(0)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational::from_big(r)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        self.binop(&rhs, |a, b| a.checked_add(b), |a, b| a + b)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self.binop(&rhs, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        self.binop(&rhs, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}

/// Panics on division by zero, like integer division; use
/// [`Scalar::checked_div`] when the divisor is data-dependent.
impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(&rhs).expect("rational division by zero")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(r) if *r.numer() != i64::MIN => Rational(Repr::Small(-r)),
            _ => Self::from_big(-self.to_big()),
        }
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = core::mem::take(self) + rhs;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = core::mem::take(self) - rhs;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        *self = core::mem::take(self) * rhs;
    }
}

// Integer right-hand sides keep closed-form coefficient code readable.
macro_rules! int_rhs {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<i64> for Rational {
            type Output = Rational;
            fn $f(self, rhs: i64) -> Rational {
                $tr::$f(self, Rational::integer(rhs))
            }
        }
        impl $tr<Rational> for i64 {
            type Output = Rational;
            fn $f(self, rhs: Rational) -> Rational {
                $tr::$f(Rational::integer(self), rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $f(self, rhs: &Rational) -> Rational {
                $tr::$f(self, rhs.clone())
            }
        }
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $f(self, rhs: &Rational) -> Rational {
                $tr::$f(self.clone(), rhs.clone())
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $f(self, rhs: Rational) -> Rational {
                $tr::$f(self.clone(), rhs)
            }
        }
        impl $tr<i64> for &Rational {
            type Output = Rational;
            fn $f(self, rhs: i64) -> Rational {
                $tr::$f(self.clone(), Rational::integer(rhs))
            }
        }
    )*};
}
int_rhs!(Add add, Sub sub, Mul mul, Div div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -self.clone()
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match &self.0 {
            Repr::Small(r) if r.is_integer() => r.numer().to_string(),
            Repr::Small(r) => alloc::format!("{}/{}", r.numer(), r.denom()),
            Repr::Big(b) if b.is_integer() => b.numer().to_string(),
            Repr::Big(b) => alloc::format!("{}/{}", b.numer(), b.denom()),
        };
        f.pad(&s)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p`, `p/q`, and finite decimals such as `-1.25` or `3e-2`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let bad = || Error::Parse(String::from(t));
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Self::from_big(BigRational::new(p, q)));
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = t[i + 1..].parse().map_err(|_| bad())?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if int_digits.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let all_digits = |d: &str| d.bytes().all(|c| c.is_ascii_digit());
        if !all_digits(int_digits) || !all_digits(frac_part) {
            return Err(bad());
        }
        if exp.unsigned_abs() > 4096 {
            return Err(bad());
        }
        let mut digits = String::from(int_digits);
        digits.push_str(frac_part);
        let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if negative {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = BigInt::from(10);
        let r = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Self::from_big(r))
    }
}

fn big_sqrt_exact(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    if &(&r * &r) == v {
        Some(r)
    } else {
        None
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational::integer(0)
    }
    fn one() -> Self {
        Rational::integer(1)
    }
    fn from_i64(v: i64) -> Self {
        Rational::integer(v)
    }
    fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.numer() == &0,
            Repr::Big(b) => b.is_zero(),
        }
    }
    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(b) => {
                // Shift both parts into f64 range before dividing.
                let n = b.numer();
                let d = b.denom();
                let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as usize;
                let nf = (n >> shift).to_f64().unwrap_or(f64::NAN);
                let df = (d >> shift).to_f64().unwrap_or(f64::NAN);
                nf / df
            }
        }
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.binop(rhs, CheckedDiv::checked_div, |a, b| a / b))
    }
    fn sqrt_exact(&self) -> Option<Self> {
        let n = big_sqrt_exact(&self.numer())?;
        let d = big_sqrt_exact(&self.denom())?;
        Some(Self::from_big(BigRational::new(n, d)))
    }
    fn add_prod(&mut self, a: &Self, b: &Self) {
        if let (Repr::Small(x), Repr::Small(y), Repr::Small(acc)) = (&a.0, &b.0, &self.0) {
            if let Some(s) = x.checked_mul(y).and_then(|p| acc.checked_add(&p)) {
                self.0 = Repr::Small(s);
                return;
            }
        }
        *self += a.clone() * b.clone();
    }
    fn sub_prod(&mut self, a: &Self, b: &Self) {
        if let (Repr::Small(x), Repr::Small(y), Repr::Small(acc)) = (&a.0, &b.0, &self.0) {
            if let Some(s) = x.checked_mul(y).and_then(|p| acc.checked_sub(&p)) {
                self.0 = Repr::Small(s);
                return;
            }
        }
        *self -= a.clone() * b.clone();
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        libm::fabs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        if *rhs == 0.0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| libm::sqrt(*self))
    }
    fn add_prod(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn sub_prod(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
}

/// Conversion of exact values into another scalar field.
pub trait FromRational: Scalar {
    fn from_rational(r: &Rational) -> Self;
}

impl FromRational for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl FromRational for f64 {
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
}

/// Shorthand constructor used throughout tests and tables.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("zero denominator")
}

/// Value that stays exact when possible and degrades to `f64` otherwise
/// (for square roots that leave the rationals).
#[derive(Clone, Debug, PartialEq)]
pub enum ExactOrFloat<S> {
    Exact(S),
    Float(f64),
}

impl<S: Scalar> ExactOrFloat<S> {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactOrFloat::Exact(s) => s.to_f64(),
            ExactOrFloat::Float(f) => *f,
        }
    }

    pub fn exact(&self) -> Option<&S> {
        match self {
            ExactOrFloat::Exact(s) => Some(s),
            ExactOrFloat::Float(_) => None,
        }
    }

    /// `self + rhs`, exact when both sides are.
    pub fn add_scalar(&self, rhs: &S) -> Self {
        match self {
            ExactOrFloat::Exact(s) => ExactOrFloat::Exact(s.clone() + rhs.clone()),
            ExactOrFloat::Float(f) => ExactOrFloat::Float(f + rhs.to_f64()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactOrFloat::Exact(s) => ExactOrFloat::Exact(-s.clone()),
            ExactOrFloat::Float(f) => ExactOrFloat::Float(-f),
        }
    }
}

impl<S: Scalar> fmt::Display for ExactOrFloat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactOrFloat::Exact(s) => write!(f, "{s}"),
            ExactOrFloat::Float(x) => write!(f, "{x:e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(1, -2).to_string(), "-1/2");
        assert_eq!(q(6, 3).to_string(), "2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::integer(i64::MAX) * Rational::integer(4);
        assert!(matches!(big.0, Repr::Big(_)));
        let back = big / Rational::integer(4);
        assert!(matches!(back.0, Repr::Small(_)));
        assert_eq!(back, Rational::integer(i64::MAX));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), q(1, 2));
        assert_eq!("-1.25".parse::<Rational>().unwrap(), q(-5, 4));
        assert_eq!("2.5e-1".parse::<Rational>().unwrap(), q(1, 4));
        assert_eq!("7".parse::<Rational>().unwrap(), q(7, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(q(1, 2).checked_div(&Rational::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(q(4, 9).sqrt_exact(), Some(q(2, 3)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn add_prod_matches_plain() {
        let mut acc = q(1, 3);
        acc.add_prod(&q(2, 5), &q(-7, 2));
        assert_eq!(acc, q(1, 3) + q(2, 5) * q(-7, 2));
        let mut big = Rational::integer(i64::MAX);
        big.add_prod(&Rational::integer(i64::MAX), &Rational::integer(2));
        assert_eq!(big.to_big(), BigRational::from_integer(BigInt::from(i64::MAX) * 3));
    }

    #[test]
    fn ordering_mixed() {
        let big = Rational::integer(i64::MAX) * Rational::integer(2);
        assert!(q(1, 2) < big);
        assert!(-big.clone() < q(-1, 2));
    }
}
