//! Exact arithmetic on the p-adic rationals `Z[1/p]`, the p-adic norm,
//! fractional parts, additive character phases, and ultrametric ball geometry.
//!
//! Every value of [`PAdicRational`] is kept in the canonical form
//! `mantissa * p^exponent` with `p` not dividing the mantissa (and
//! `mantissa = 0, exponent = 0` for zero), so the p-adic valuation is read
//! off the exponent and structural equality coincides with numeric equality.
//! All quantities handled by this crate (points, translations, frequencies)
//! live in `Z[1/p]`, which is closed under `+`, `-` and `*`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PadicError {
    #[error("p must be prime, got {0}")]
    NotPrime(u64),
    #[error("values belong to different primes: {0} and {1}")]
    PrimeMismatch(u64, u64),
    #[error("denominator of {0} is not a power of {1}")]
    DenominatorNotPowerOfP(String, u64),
    #[error("cannot parse {0:?} as a p-adic rational (expected \"m*p^e\")")]
    ParseRational(String),
    #[error("cannot parse {0:?} as a ball (expected \"center;radiusLog\")")]
    ParseBall(String),
}

/// A verified prime base. Construction with a composite number is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, PadicError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(PadicError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// `p^k` as an exact rational, for any sign of `k`.
    pub fn pow_rational(self, k: i64) -> BigRational {
        let mag = self.to_bigint().pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(mag)
        } else {
            BigRational::new(BigInt::one(), mag)
        }
    }

    /// `p^k` in double precision.
    pub fn pow_f64(self, k: i64) -> f64 {
        (self.0 as f64).powi(k as i32)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of `Z[1/p]`, stored as `mantissa * p^exponent`.
///
/// Canonical form: `p` does not divide a nonzero mantissa, and zero is
/// `(0, 0)`. The valuation of a nonzero value is therefore its exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicRational {
    prime: Prime,
    mantissa: BigInt,
    exponent: i64,
}

impl PAdicRational {
    /// Builds `mantissa * p^exponent` and normalizes to canonical form.
    pub fn new(prime: Prime, mantissa: BigInt, exponent: i64) -> Self {
        let mut value = PAdicRational {
            prime,
            mantissa,
            exponent,
        };
        value.normalize();
        value
    }

    pub fn zero(prime: Prime) -> Self {
        PAdicRational {
            prime,
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one(prime: Prime) -> Self {
        PAdicRational::from_integer(prime, BigInt::one())
    }

    pub fn from_integer<T: Into<BigInt>>(prime: Prime, n: T) -> Self {
        PAdicRational::new(prime, n.into(), 0)
    }

    /// Converts an exact rational whose denominator is a power of `p`.
    pub fn from_rational(prime: Prime, value: &BigRational) -> Result<Self, PadicError> {
        let mut den = value.denom().abs();
        let p = prime.to_bigint();
        let mut exponent = 0i64;
        while den > BigInt::one() {
            let (q, r) = den.div_rem(&p);
            if !r.is_zero() {
                return Err(PadicError::DenominatorNotPowerOfP(
                    value.to_string(),
                    prime.get(),
                ));
            }
            den = q;
            exponent -= 1;
        }
        let numer = if value.denom().is_negative() {
            -value.numer()
        } else {
            value.numer().clone()
        };
        Ok(PAdicRational::new(prime, numer, exponent))
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let p = self.prime.to_bigint();
        loop {
            let (q, r) = self.mantissa.div_rem(&p);
            if r.is_zero() {
                self.mantissa = q;
                self.exponent += 1;
            } else {
                break;
            }
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// The p-adic valuation; `None` encodes the infinite valuation of zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent)
        }
    }

    /// The p-adic norm `p^(-valuation)` as an exact rational; zero for zero.
    pub fn norm(&self) -> BigRational {
        match self.valuation() {
            None => BigRational::zero(),
            Some(v) => self.prime.pow_rational(-v),
        }
    }

    /// The value as an ordinary rational number.
    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.mantissa.clone()) * self.prime.pow_rational(self.exponent)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    fn check_same_prime(&self, other: &Self) -> Prime {
        assert_eq!(
            self.prime, other.prime,
            "mixed primes: {} vs {}",
            self.prime.get(),
            other.prime.get()
        );
        self.prime
    }

    pub fn add(&self, other: &Self) -> Self {
        let prime = self.check_same_prime(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let p = prime.to_bigint();
        let lift = |m: &BigInt, from: i64| -> BigInt { m * p.pow((from - e) as u32) };
        PAdicRational::new(
            prime,
            lift(&self.mantissa, self.exponent) + lift(&other.mantissa, other.exponent),
            e,
        )
    }

    pub fn neg(&self) -> Self {
        PAdicRational {
            prime: self.prime,
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prime = self.check_same_prime(other);
        if self.is_zero() || other.is_zero() {
            return PAdicRational::zero(prime);
        }
        // p divides neither mantissa, so the product is already canonical.
        PAdicRational {
            prime,
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self.exponent + other.exponent,
        }
    }

    /// Multiplies by `p^k` (an exact valuation shift).
    pub fn mul_pow_p(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        PAdicRational {
            prime: self.prime,
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// The part of the base-p expansion with digits strictly below `scale`.
    ///
    /// For `scale = 0` this is the p-adic fractional part. The remainder
    /// `self - digits_below(scale)` always has valuation at least `scale`.
    pub fn digits_below(&self, scale: i64) -> Self {
        if self.is_zero() || self.exponent >= scale {
            return PAdicRational::zero(self.prime);
        }
        let n = (scale - self.exponent) as u32;
        let modulus = self.prime.to_bigint().pow(n);
        let reduced = self.mantissa.mod_floor(&modulus);
        PAdicRational::new(self.prime, reduced, self.exponent)
    }

    /// The p-adic fractional part: the sum of the negative-position digits.
    ///
    /// The result lies in `[0, 1)` as a real rational and differs from the
    /// input by a p-adic integer.
    pub fn fractional_part(&self) -> Self {
        self.digits_below(0)
    }

    /// The phase of the additive character `x -> e^(2*pi*i*{x}_p)`.
    pub fn character_phase(&self) -> UnitPhase {
        UnitPhase {
            turns: self.fractional_part(),
        }
    }

    /// Total order by real value (canonical forms make this injective).
    pub fn real_cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl PartialOrd for PAdicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAdicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prime
            .cmp(&other.prime)
            .then_with(|| self.real_cmp(other))
    }
}

impl fmt::Display for PAdicRational {
    /// Textual form `m*p^e`, e.g. `3*2^-2` for 3/4 over p = 2.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}^{}", self.mantissa, self.prime.get(), self.exponent)
    }
}

impl FromStr for PAdicRational {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, PadicError> {
        let bad = || PadicError::ParseRational(s.to_string());
        let (m_str, rest) = s.split_once('*').ok_or_else(bad)?;
        let (p_str, e_str) = rest.split_once('^').ok_or_else(bad)?;
        let mantissa = BigInt::from_str(m_str.trim()).map_err(|_| bad())?;
        let p: u64 = p_str.trim().parse().map_err(|_| bad())?;
        let exponent: i64 = e_str.trim().parse().map_err(|_| bad())?;
        let prime = Prime::new(p)?;
        Ok(PAdicRational::new(prime, mantissa, exponent))
    }
}

/// A point on the unit circle, `e^(2*pi*i*turns)`, with `turns` in `[0, 1)`
/// and denominator a power of p. Closed under multiplication; exactly the
/// values taken by the additive character on `Z[1/p]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitPhase {
    turns: PAdicRational,
}

impl UnitPhase {
    pub fn one(prime: Prime) -> Self {
        UnitPhase {
            turns: PAdicRational::zero(prime),
        }
    }

    pub fn turns(&self) -> &PAdicRational {
        &self.turns
    }

    pub fn is_one(&self) -> bool {
        self.turns.is_zero()
    }

    /// Phase product: turns add modulo 1.
    pub fn mul(&self, other: &Self) -> Self {
        UnitPhase {
            turns: self.turns.add(&other.turns).fractional_part(),
        }
    }

    pub fn conj(&self) -> Self {
        UnitPhase {
            turns: self.turns.neg().fractional_part(),
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        let t = self.turns.to_f64();
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
    }
}

/// How two ultrametric balls relate; partial overlap cannot occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallRelation {
    Disjoint,
    Equal,
    FirstInsideSecond,
    SecondInsideFirst,
}

/// The ball `center + p^(-radius_log) * Z_p = { x : |x - c|_p <= p^radius_log }`.
///
/// The stored center is canonical: all base-p digits at positions
/// `>= -radius_log` are zeroed, so equal balls have equal fields and a ball
/// can serve as a hash or sort key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    center: PAdicRational,
    radius_log: i64,
}

impl Ball {
    pub fn new(center: PAdicRational, radius_log: i64) -> Self {
        let center = center.digits_below(-radius_log);
        Ball { center, radius_log }
    }

    /// The unit ball `Z_p`.
    pub fn integers(prime: Prime) -> Self {
        Ball::new(PAdicRational::zero(prime), 0)
    }

    pub fn prime(&self) -> Prime {
        self.center.prime()
    }

    pub fn center(&self) -> &PAdicRational {
        &self.center
    }

    pub fn radius_log(&self) -> i64 {
        self.radius_log
    }

    pub fn contains(&self, x: &PAdicRational) -> bool {
        match x.sub(&self.center).valuation() {
            None => true,
            Some(v) => v >= -self.radius_log,
        }
    }

    /// Haar measure `p^radius_log` (normalized so that `Z_p` has measure 1).
    pub fn measure(&self) -> BigRational {
        self.prime().pow_rational(self.radius_log)
    }

    pub fn measure_f64(&self) -> f64 {
        self.prime().pow_f64(self.radius_log)
    }

    /// Ultrametric trichotomy: disjoint, equal, or nested.
    pub fn relation(&self, other: &Ball) -> BallRelation {
        match self.radius_log.cmp(&other.radius_log) {
            Ordering::Equal => {
                if self.center == other.center {
                    BallRelation::Equal
                } else {
                    BallRelation::Disjoint
                }
            }
            Ordering::Less => {
                if other.contains(&self.center) {
                    BallRelation::FirstInsideSecond
                } else {
                    BallRelation::Disjoint
                }
            }
            Ordering::Greater => {
                if self.contains(&other.center) {
                    BallRelation::SecondInsideFirst
                } else {
                    BallRelation::Disjoint
                }
            }
        }
    }

    /// The p disjoint sub-balls one level finer whose union is this ball.
    pub fn split(&self) -> Vec<Ball> {
        let p = self.prime();
        let step = -self.radius_log;
        (0..p.get())
            .map(|k| {
                let offset = PAdicRational::new(p, BigInt::from(k), step);
                Ball::new(self.center.add(&offset), self.radius_log - 1)
            })
            .collect()
    }

    /// The smallest ball containing both arguments.
    pub fn enclosing(a: &Ball, b: &Ball) -> Ball {
        let mut radius_log = a.radius_log.max(b.radius_log);
        if let Some(v) = a.center.sub(&b.center).valuation() {
            radius_log = radius_log.max(-v);
        }
        Ball::new(a.center.clone(), radius_log)
    }
}

impl PartialOrd for Ball {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ball {
    fn cmp(&self, other: &Self) -> Ordering {
        self.center
            .cmp(&other.center)
            .then_with(|| self.radius_log.cmp(&other.radius_log))
    }
}

impl fmt::Display for Ball {
    /// Textual form `center;radiusLog`, e.g. `1*2^0;-1` for `1 + 2Z_2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.center, self.radius_log)
    }
}

impl FromStr for Ball {
    type Err = PadicError;

    fn from_str(s: &str) -> Result<Self, PadicError> {
        let bad = || PadicError::ParseBall(s.to_string());
        let (c_str, r_str) = s.rsplit_once(';').ok_or_else(bad)?;
        let center: PAdicRational = c_str.trim().parse()?;
        let radius_log: i64 = r_str.trim().parse().map_err(|_| bad())?;
        Ok(Ball::new(center, radius_log))
    }
}
