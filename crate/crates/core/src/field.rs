//! The residue field F_q = Z[τ]/(p).
//!
//! Degree-2 fields are F_r[θ]/(θ² − θ − 1), so the residue of τ is θ.
//! Elements pack into one machine word as `x + r·y`; the packed form is
//! what the matrix engine stores and hashes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::golden::{GoldenInt, GoldenPrime, PrimeClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square test is undefined in characteristic 2")]
    EvenCharacteristic,
    #[error("field of order {0} is too large")]
    TooLarge(u64),
}

/// An element `x + yθ`; `y = 0` in prime fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FieldElem {
    pub x: u32,
    pub y: u32,
}

/// Packed representation `x + r·y`, always `< q`.
pub type Packed = u32;

const TABLE_LIMIT: u64 = 256;
const LOG_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug)]
enum Tables {
    None,
    Log { log: Vec<u32>, exp: Vec<u32> },
    Full { add: Vec<u16>, mul: Vec<u16> },
}

#[derive(Clone, Debug)]
pub struct FieldCtx {
    /// The rational prime under p.
    pub char_: u32,
    pub degree: u8,
    pub q: u32,
    pub tau_image: FieldElem,
    pub prime: GoldenPrime,
    tables: Tables,
}

impl FieldCtx {
    pub fn zero(&self) -> FieldElem {
        FieldElem { x: 0, y: 0 }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { x: 1, y: 0 }
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem { x: n.rem_euclid(self.char_ as i64) as u32, y: 0 }
    }

    pub fn elem(&self, x: u32, y: u32) -> FieldElem {
        let r = self.char_;
        FieldElem { x: x % r, y: if self.degree == 2 { y % r } else { 0 } }
    }

    pub fn pack(&self, e: FieldElem) -> Packed {
        e.x + self.char_ * e.y
    }

    pub fn unpack(&self, p: Packed) -> FieldElem {
        FieldElem { x: p % self.char_, y: p / self.char_ }
    }

    /// All field elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |p| self.unpack(p))
    }

    /// The reduction homomorphism Z[τ] → F_q.
    pub fn reduce(&self, z: &GoldenInt) -> FieldElem {
        let r = BigInt::from(self.char_);
        let a = self.from_int(z.a.mod_floor(&r).to_i64().unwrap());
        let b = self.from_int(z.b.mod_floor(&r).to_i64().unwrap());
        self.add(a, self.mul(b, self.tau_image))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let r = self.char_;
        FieldElem { x: (a.x + b.x) % r, y: (a.y + b.y) % r }
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let r = self.char_;
        FieldElem { x: (r - a.x) % r, y: (r - a.y) % r }
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let r = self.char_ as u64;
        if self.degree == 1 {
            return FieldElem { x: (a.x as u64 * b.x as u64 % r) as u32, y: 0 };
        }
        // (x1 + y1θ)(x2 + y2θ) with θ² = θ + 1
        let (x1, y1, x2, y2) = (a.x as u64, a.y as u64, b.x as u64, b.y as u64);
        let yy = y1 * y2 % r;
        FieldElem {
            x: ((x1 * x2 + yy) % r) as u32,
            y: ((x1 * y2 + y1 * x2 + yy) % r) as u32,
        }
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a == self.zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `e^((q−1)/2) = 1`; requires odd q and e ≠ 0.
    pub fn is_square(&self, e: FieldElem) -> Result<bool, FieldError> {
        if self.char_ == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if e == self.zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(e, (self.q as u64 - 1) / 2) == self.one())
    }

    // Packed fast paths for the matrix engine.

    #[inline]
    pub fn padd(&self, a: Packed, b: Packed) -> Packed {
        match &self.tables {
            Tables::Full { add, .. } => add[(a * self.q + b) as usize] as Packed,
            _ if self.degree == 1 => {
                let s = a + b;
                if s >= self.q {
                    s - self.q
                } else {
                    s
                }
            }
            _ => self.pack(self.add(self.unpack(a), self.unpack(b))),
        }
    }

    #[inline]
    pub fn pmul(&self, a: Packed, b: Packed) -> Packed {
        match &self.tables {
            Tables::Full { mul, .. } => mul[(a * self.q + b) as usize] as Packed,
            Tables::Log { log, exp } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    let n = self.q - 1;
                    let mut s = log[a as usize] + log[b as usize];
                    if s >= n {
                        s -= n;
                    }
                    exp[s as usize]
                }
            }
            Tables::None => self.pack(self.mul(self.unpack(a), self.unpack(b))),
        }
    }

    #[inline]
    pub fn pneg(&self, a: Packed) -> Packed {
        self.pack(self.neg(self.unpack(a)))
    }

    pub fn pinv(&self, a: Packed) -> Result<Packed, FieldError> {
        Ok(self.pack(self.inv(self.unpack(a))?))
    }

    fn build_tables(&mut self) {
        let q = self.q as u64;
        if q <= TABLE_LIMIT {
            let mut add = vec![0u16; (q * q) as usize];
            let mut mul = vec![0u16; (q * q) as usize];
            for a in 0..self.q {
                for b in 0..self.q {
                    let (ea, eb) = (self.unpack(a), self.unpack(b));
                    add[(a * self.q + b) as usize] = self.pack(self.add(ea, eb)) as u16;
                    mul[(a * self.q + b) as usize] = self.pack(self.mul(ea, eb)) as u16;
                }
            }
            self.tables = Tables::Full { add, mul };
        } else if q <= LOG_LIMIT {
            let g = self.primitive_element();
            let n = self.q as usize - 1;
            let mut log = vec![0u32; self.q as usize];
            let mut exp = vec![0u32; n];
            let mut acc = self.one();
            for (i, slot) in exp.iter_mut().enumerate() {
                let p = self.pack(acc);
                *slot = p;
                log[p as usize] = i as u32;
                acc = self.mul(acc, g);
            }
            self.tables = Tables::Log { log, exp };
        }
    }

    /// Smallest (in packed order) generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        let n = self.q as u64 - 1;
        let mut factors = Vec::new();
        let mut m = n;
        let mut f = 2;
        while f * f <= m {
            if m % f == 0 {
                factors.push(f);
                while m % f == 0 {
                    m /= f;
                }
            }
            f += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (1..self.q)
            .map(|p| self.unpack(p))
            .find(|&e| factors.iter().all(|&l| self.pow(e, n / l) != self.one()))
            .expect("finite fields have primitive elements")
    }
}

/// Build F_q = Z[τ]/(p).
pub fn build_field(p: &GoldenPrime) -> Result<FieldCtx, FieldError> {
    if p.q > u32::MAX as u64 / 4 {
        return Err(FieldError::TooLarge(p.q));
    }
    let (char_, degree) = match p.klass {
        PrimeClass::ClassI => (5u32, 1u8),
        PrimeClass::ClassII | PrimeClass::Even => (p.r as u32, 2u8),
        PrimeClass::ClassIII => (p.q as u32, 1u8),
    };
    let q = char_.pow(degree as u32);
    let tau_image = match p.klass {
        PrimeClass::ClassI => FieldElem { x: 3, y: 0 },
        PrimeClass::ClassII | PrimeClass::Even => FieldElem { x: 0, y: 1 },
        PrimeClass::ClassIII => {
            // c + dτ ≡ 0  ⇒  τ ≡ −c·d⁻¹
            let m = BigInt::from(q);
            let c = p.c().mod_floor(&m).to_u64().unwrap();
            let d = p.d().mod_floor(&m).to_u64().unwrap();
            let d_inv = mod_inverse(d, q as u64);
            FieldElem { x: ((q as u64 - c) % q as u64 * d_inv % q as u64) as u32, y: 0 }
        }
    };
    let mut ctx = FieldCtx { char_, degree, q, tau_image, prime: p.clone(), tables: Tables::None };
    ctx.build_tables();
    Ok(ctx)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = num_integer::Integer::extended_gcd(&(a as i64), &(m as i64));
    e.x.rem_euclid(m as i64) as u64
}
