#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use star53k::golden::primes_up_to_norm;
use star53k::star::GoldenMat;
use star53k::{golden_legendre, GoldenInt, GoldenPrime};

pub const TAU: f64 = 1.618_033_988_749_895;

pub fn odd_primes(bound: u64) -> Vec<GoldenPrime> {
    primes_up_to_norm(bound).into_iter().filter(GoldenPrime::is_odd).collect()
}

pub fn prime(text: &str) -> GoldenPrime {
    text.parse().unwrap()
}

/// Residue-field model built only from the prime's coordinates.
///
/// Degree 1: τ is the root t of c + d t ≡ 0 (mod q), found by search.
/// Degree 2: pairs (x, y) = x + yθ with θ² = θ + 1, τ ↦ θ.
pub struct Oracle {
    pub r: i64,
    pub degree: u8,
    pub t: i64,
}

impl Oracle {
    pub fn new(p: &GoldenPrime) -> Self {
        let r = p.r as i64;
        if p.q == p.r {
            let c = i64::try_from(p.c()).unwrap().rem_euclid(r);
            let d = i64::try_from(p.d()).unwrap().rem_euclid(r);
            let t = (0..r).find(|&t| (c + d * t) % r == 0 && (t * t - t - 1).rem_euclid(r) == 0).unwrap();
            Oracle { r, degree: 1, t }
        } else {
            Oracle { r, degree: 2, t: 0 }
        }
    }

    pub fn reduce(&self, w: &GoldenInt) -> (i64, i64) {
        let m = BigInt::from(self.r);
        let a = i64::try_from(((&w.a % &m) + &m) % &m).unwrap();
        let b = i64::try_from(((&w.b % &m) + &m) % &m).unwrap();
        if self.degree == 1 {
            ((a + b * self.t) % self.r, 0)
        } else {
            (a, b)
        }
    }

    pub fn mul(&self, (a, b): (i64, i64), (c, d): (i64, i64)) -> (i64, i64) {
        let r = self.r;
        if self.degree == 1 {
            (a * c % r, 0)
        } else {
            ((a * c + b * d) % r, (a * d + b * c + b * d) % r)
        }
    }

    pub fn squares(&self) -> HashSet<(i64, i64)> {
        let ys = if self.degree == 1 { 0..1 } else { 0..self.r };
        let mut out = HashSet::new();
        for x in 0..self.r {
            for y in ys.clone() {
                if (x, y) != (0, 0) {
                    out.insert(self.mul((x, y), (x, y)));
                }
            }
        }
        out
    }
}

fn random_w(rng: &mut ChaCha8Rng, bound: i64) -> GoldenInt {
    GoldenInt::new(rng.gen_range(-bound..bound), rng.gen_range(-bound..bound))
}

/// Compares the symbol with brute-force squares for `samples` random w per prime.
pub fn square_agreement(primes: &[GoldenPrime], samples: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checked = 0;
    for p in primes {
        let o = Oracle::new(p);
        let squares = o.squares();
        if squares.len() as u64 != (p.q - 1) / 2 {
            return Err(format!("oracle square count wrong at {p}"));
        }
        for _ in 0..samples {
            let w = random_w(rng, 1_000_000);
            let res = o.reduce(&w);
            let expected = if res == (0, 0) {
                0
            } else if squares.contains(&res) {
                1
            } else {
                -1
            };
            let got = golden_legendre(&w, p).map_err(|e| e.to_string())?;
            if got != expected {
                return Err(format!("({w} / {p}) = {got}, oracle says {expected}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// The symbol is unchanged when p is replaced by u·p for the listed units.
pub fn associate_invariance(primes: &[GoldenPrime], samples: usize, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let units = [GoldenInt::int(-1), GoldenInt::tau(), GoldenInt::tau_inv(), GoldenInt::tau_pow(2)];
    let mut checked = 0;
    for p in primes {
        let others: Vec<GoldenPrime> =
            units.iter().map(|u| GoldenPrime { value: u * &p.value, ..p.clone() }).collect();
        for _ in 0..samples {
            let w = random_w(rng, 5_000);
            let base = golden_legendre(&w, p).map_err(|e| e.to_string())?;
            for other in &others {
                let got = golden_legendre(&w, other).map_err(|e| e.to_string())?;
                if got != base {
                    return Err(format!("({w} / {}) = {got} but ({w} / {p}) = {base}", other.value));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Orders of orthogonal groups, written out independently of the library.
pub fn o4_order(q: u64, eps: i8) -> u128 {
    let q = q as u128;
    let q2 = q * q;
    let plus_minus = if eps == 1 { q2 - 1 } else { q2 + 1 };
    2 * q2 * plus_minus * (q2 - 1)
}

pub fn golden_to_f64(z: &GoldenInt) -> f64 {
    let a: f64 = z.a.to_string().parse().unwrap();
    let b: f64 = z.b.to_string().parse().unwrap();
    a + b * TAU
}

/// Determinant by partial-pivot elimination over f64.
pub fn det_f64(m: &GoldenMat) -> f64 {
    let mut a: Vec<Vec<f64>> = m.0.iter().map(|row| row.iter().map(golden_to_f64).collect()).collect();
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[piv][col].abs() < 1e-12 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}
