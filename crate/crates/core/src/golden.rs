//! Exact arithmetic in the golden-ratio ring Z[τ], τ² = τ + 1.
//!
//! Elements are stored as `a + bτ` with arbitrary-precision coefficients.
//! The module also classifies primes of Z[τ] and evaluates the quadratic
//! residue symbol modulo an odd prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("zero is not a valid argument")]
    Zero,
    #[error("{0} is a unit")]
    Unit(String),
    #[error("{0} is composite")]
    Composite(String),
    #[error("the symbol is undefined modulo an even prime")]
    EvenPrime,
    #[error("modulus {0} is not an odd rational prime")]
    BadModulus(String),
    #[error("cannot parse `{0}` as an element of Z[t]")]
    Parse(String),
}

/// An element `a + bτ` of Z[τ].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GoldenInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl GoldenInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        GoldenInt { a: a.into(), b: b.into() }
    }

    pub fn int(a: impl Into<BigInt>) -> Self {
        GoldenInt::new(a, 0)
    }

    pub fn zero() -> Self {
        GoldenInt::new(0, 0)
    }

    pub fn one() -> Self {
        GoldenInt::new(1, 0)
    }

    pub fn tau() -> Self {
        GoldenInt::new(0, 1)
    }

    /// τ⁻¹ = τ − 1.
    pub fn tau_inv() -> Self {
        GoldenInt::new(-1, 1)
    }

    /// τⁿ for any integer n.
    pub fn tau_pow(n: i64) -> Self {
        let base = if n >= 0 { GoldenInt::tau() } else { GoldenInt::tau_inv() };
        base.pow(n.unsigned_abs())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// N(a + bτ) = a² + ab − b².
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Galois conjugate: τ ↦ 1 − τ.
    pub fn conj(&self) -> Self {
        GoldenInt { a: &self.a + &self.b, b: -&self.b }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GoldenInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        GoldenInt { a: &self.a * k, b: &self.b * k }
    }

    /// Exact quotient `self / other`, or `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &GoldenInt) -> Option<GoldenInt> {
        let n = other.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &other.conj();
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(GoldenInt { a: qa, b: qb })
        } else {
            None
        }
    }

    pub fn divides(&self, other: &GoldenInt) -> bool {
        other.div_exact(self).is_some()
    }

    /// `|a| + |b|`, the size measure used to pick canonical associates.
    fn size(&self) -> BigInt {
        self.a.abs() + self.b.abs()
    }
}

impl From<i64> for GoldenInt {
    fn from(a: i64) -> Self {
        GoldenInt::int(a)
    }
}

impl<'a> Add<&'a GoldenInt> for &'a GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: &GoldenInt) -> GoldenInt {
        GoldenInt { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a GoldenInt> for &'a GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: &GoldenInt) -> GoldenInt {
        GoldenInt { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a GoldenInt> for &'a GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: &GoldenInt) -> GoldenInt {
        // (a + bτ)(c + dτ) = (ac + bd) + (ad + bc + bd)τ
        let bd = &self.b * &rhs.b;
        GoldenInt {
            a: &self.a * &rhs.a + &bd,
            b: &self.a * &rhs.b + &self.b * &rhs.a + bd,
        }
    }
}

impl Neg for &GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt { a: -&self.a, b: -&self.b }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GoldenInt> for GoldenInt {
            type Output = GoldenInt;
            fn $m(self, rhs: GoldenInt) -> GoldenInt {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GoldenInt> for GoldenInt {
            type Output = GoldenInt;
            fn $m(self, rhs: &GoldenInt) -> GoldenInt {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        -&self
    }
}

/// Emits `<int>` when b = 0, otherwise `<int>±<int>t`.
impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.is_negative() {
            write!(f, "{}-{}t", self.a, -&self.b)
        } else {
            write!(f, "{}+{}t", self.a, self.b)
        }
    }
}

impl FromStr for GoldenInt {
    type Err = RingError;

    /// Grammar: `<int>` | `<int>±<int>t` | `t`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RingError::Parse(s.to_string());
        let t = s.trim();
        if t == "t" {
            return Ok(GoldenInt::tau());
        }
        let parse_int = |x: &str| -> Result<BigInt, RingError> {
            let body = x.strip_prefix('-').unwrap_or(x);
            if body.is_empty() || !body.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            x.parse::<BigInt>().map_err(|_| err())
        };
        match t.strip_suffix('t') {
            None => Ok(GoldenInt::int(parse_int(t)?)),
            Some(rest) => {
                // split at the sign separating the two integers (skip a leading sign)
                let pos = rest
                    .char_indices()
                    .skip(1)
                    .find(|&(_, c)| c == '+' || c == '-')
                    .map(|(i, _)| i)
                    .ok_or_else(err)?;
                let a = parse_int(&rest[..pos])?;
                let sign = &rest[pos..pos + 1];
                let b_txt = &rest[pos + 1..];
                if b_txt.starts_with('-') {
                    return Err(err());
                }
                let b = parse_int(b_txt)?;
                Ok(GoldenInt::new(a, if sign == "-" { -b } else { b }))
            }
        }
    }
}

/// Canonical representative of the associate class `{±τⁿ z}`: minimizes
/// `(|a| + |b|, a, b)` lexicographically.
pub fn canonical_associate(z: &GoldenInt) -> Result<GoldenInt, RingError> {
    if z.is_zero() {
        return Err(RingError::Zero);
    }
    let key = |w: &GoldenInt| (w.size(), w.a.clone(), w.b.clone());
    let mut best = z.clone();
    let consider = |w: &GoldenInt, best: &mut GoldenInt| {
        for cand in [w.clone(), -w] {
            if key(&cand) < key(best) {
                *best = cand;
            }
        }
    };
    consider(z, &mut best);
    // Sizes grow geometrically away from the minimum along the unit orbit.
    for step in [GoldenInt::tau(), GoldenInt::tau_inv()] {
        let mut w = z.clone();
        let mut since_improved = 0u32;
        let mut local_best = z.size();
        loop {
            w = &w * &step;
            let sz = w.size();
            if sz < local_best {
                local_best = sz.clone();
                since_improved = 0;
            } else {
                since_improved += 1;
            }
            consider(&w, &mut best);
            if since_improved >= 6 && sz > BigInt::from(8) * &local_best {
                break;
            }
        }
    }
    Ok(best)
}

/// True when `z` and `w` are associates.
pub fn are_associates(z: &GoldenInt, w: &GoldenInt) -> bool {
    match z.div_exact(w) {
        Some(u) => u.is_unit(),
        None => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PrimeClass {
    Even,
    #[serde(rename = "I")]
    ClassI,
    #[serde(rename = "II")]
    ClassII,
    #[serde(rename = "III")]
    ClassIII,
}

impl fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrimeClass::Even => "Even",
            PrimeClass::ClassI => "I",
            PrimeClass::ClassII => "II",
            PrimeClass::ClassIII => "III",
        };
        f.write_str(s)
    }
}

/// A prime of Z[τ], stored as its canonical associate `c + dτ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoldenPrime {
    pub value: GoldenInt,
    pub klass: PrimeClass,
    /// Order of the residue field, `|N(value)|`.
    pub q: u64,
    /// Residue characteristic.
    pub r: u64,
}

impl GoldenPrime {
    pub fn c(&self) -> &BigInt {
        &self.value.a
    }

    pub fn d(&self) -> &BigInt {
        &self.value.b
    }

    pub fn is_odd(&self) -> bool {
        self.klass != PrimeClass::Even
    }

    /// True when the prime is an associate of the rational integer `n`.
    pub fn is_associate_of(&self, n: i64) -> bool {
        are_associates(&self.value, &GoldenInt::int(n))
    }

    pub fn sqrt5() -> Self {
        classify_prime(&GoldenInt::new(-1, 2)).expect("√5 is prime")
    }

    pub fn rational(r: i64) -> Result<Self, RingError> {
        classify_prime(&GoldenInt::int(r))
    }
}

impl fmt::Display for GoldenPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl FromStr for GoldenPrime {
    type Err = RingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        classify_prime(&s.parse::<GoldenInt>()?)
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Decide primality of `z` and return its class.
pub fn classify_prime(z: &GoldenInt) -> Result<GoldenPrime, RingError> {
    if z.is_zero() {
        return Err(RingError::Zero);
    }
    if z.is_unit() {
        return Err(RingError::Unit(z.to_string()));
    }
    let composite = || RingError::Composite(z.to_string());
    let n = z.norm().abs().to_u64().ok_or_else(composite)?;
    let value = canonical_associate(z)?;
    if is_prime_u64(n) {
        let klass = if n == 5 { PrimeClass::ClassI } else { PrimeClass::ClassIII };
        let mut p = GoldenPrime { value, klass, q: n, r: n };
        if klass == PrimeClass::ClassIII && (p.d() % BigInt::from(n)).is_zero() {
            // unreachable for canonical associates, but keep d invertible
            p.value = &p.value * &GoldenInt::tau();
        }
        return Ok(p);
    }
    let r = isqrt(n);
    if r * r == n && is_prime_u64(r) && are_associates(z, &GoldenInt::int(r as i64)) {
        let klass = match r {
            2 => PrimeClass::Even,
            _ if r % 5 == 2 || r % 5 == 3 => PrimeClass::ClassII,
            _ => return Err(composite()),
        };
        return Ok(GoldenPrime { value, klass, q: n, r });
    }
    Err(composite())
}

fn mod_pow(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Ordinary Legendre symbol `(a/m)` by Euler's criterion.
pub fn rational_legendre(a: &BigInt, m: u64) -> Result<i8, RingError> {
    if m % 2 == 0 || !is_prime_u64(m) {
        return Err(RingError::BadModulus(m.to_string()));
    }
    let r = a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits");
    if r == 0 {
        return Ok(0);
    }
    Ok(if mod_pow(r, (m - 1) / 2, m) == 1 { 1 } else { -1 })
}

/// Quadratic residue symbol of `w` modulo the odd prime `p`.
pub fn golden_legendre(w: &GoldenInt, p: &GoldenPrime) -> Result<i8, RingError> {
    match p.klass {
        PrimeClass::Even => Err(RingError::EvenPrime),
        PrimeClass::ClassI => {
            // τ ≡ 3 (mod √5)
            let a = if w.b.is_zero() { w.a.clone() } else { &w.a + BigInt::from(3) * &w.b };
            rational_legendre(&a, 5)
        }
        PrimeClass::ClassII => rational_legendre(&w.norm(), p.r),
        PrimeClass::ClassIII => {
            let (c, d) = (p.c(), p.d());
            let x = &w.a * d * d - &w.b * c * d;
            let modulus = p.value.norm().abs().to_u64().expect("norm fits");
            rational_legendre(&x, modulus)
        }
    }
}

/// All primes of Z[τ] (canonical associates) with `q ≤ bound`, sorted by `(q, c, d)`.
pub fn primes_up_to_norm(bound: u64) -> Vec<GoldenPrime> {
    let mut out: Vec<GoldenPrime> = Vec::new();
    // inert and even primes: q = r²
    let mut r = 2u64;
    while r * r <= bound {
        if is_prime_u64(r) && (r == 2 || r % 5 == 2 || r % 5 == 3) {
            out.push(classify_prime(&GoldenInt::int(r as i64)).expect("inert prime"));
        }
        r += 1;
    }
    // split and ramified primes: |c² + cd − d²| = r prime
    let lim = 2 * isqrt(bound) as i64 + 2;
    let mut seen = std::collections::HashSet::new();
    for c in -lim..=lim {
        for d in -lim..=lim {
            let n = (c * c + c * d - d * d).unsigned_abs();
            if n < 2 || n > bound || !is_prime_u64(n) {
                continue;
            }
            let z = GoldenInt::new(c, d);
            let p = classify_prime(&z).expect("prime norm implies prime");
            if seen.insert(p.value.clone()) {
                out.push(p);
            }
        }
    }
    out.sort_by(|x, y| (x.q, &x.value.a, &x.value.b).cmp(&(y.q, &y.value.a, &y.value.b)));
    out
}

/// Fibonacci numbers with F_0 = 0, F_1 = 1.
pub fn fibonacci(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let t = &a + &b;
        a = b;
        b = t;
    }
    a
}
