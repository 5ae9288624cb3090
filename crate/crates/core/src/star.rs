//! Generators, Gram and Cartan matrices of the star Coxeter group [5,3;k]
//! over Z[τ], and their reductions modulo a prime.
//!
//! Matrices are written in the rescaled root basis `v0..v3`; column `j`
//! holds the image of `v_j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::field::FieldCtx;
use crate::golden::{GoldenInt, GoldenPrime};
use crate::matrix::{element_order, Mat4};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("unsupported k `{0}` (expected 3, 4, 5, 6 or inf)")]
    BadK(String),
    #[error("form scale must be 1 or 2, got {0}")]
    BadScale(i64),
    #[error("determinant identity failed for k = {k}: {which} = {got}, expected {expected}")]
    DeterminantMismatch { k: K, which: &'static str, got: String, expected: String },
    #[error("Cartan entry ({0},{1}) is not integral")]
    NonIntegralCartan(usize, usize),
    #[error("determinant identities are stated for finite k only")]
    InfiniteK,
}

/// The label on the r1–r3 branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum K {
    K3,
    K4,
    K5,
    K6,
    Inf,
}

impl K {
    pub const FINITE: [K; 4] = [K::K3, K::K4, K::K5, K::K6];

    pub fn value(self) -> Option<u64> {
        match self {
            K::K3 => Some(3),
            K::K4 => Some(4),
            K::K5 => Some(5),
            K::K6 => Some(6),
            K::Inf => None,
        }
    }

    /// ρ_k: 1, 2, τ², 3, and 4 for k = ∞.
    pub fn rho(self) -> GoldenInt {
        match self {
            K::K3 => GoldenInt::int(1),
            K::K4 => GoldenInt::int(2),
            K::K5 => GoldenInt::tau_pow(2),
            K::K6 => GoldenInt::int(3),
            K::Inf => GoldenInt::int(4),
        }
    }
}

impl fmt::Display for K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

impl FromStr for K {
    type Err = StarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "3" => Ok(K::K3),
            "4" => Ok(K::K4),
            "5" => Ok(K::K5),
            "6" => Ok(K::K6),
            "inf" | "∞" => Ok(K::Inf),
            other => Err(StarError::BadK(other.to_string())),
        }
    }
}

/// Parameters of one reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarParams {
    pub k: K,
    pub prime: GoldenPrime,
    /// Scale μ ∈ {1, 2} applied to the Gram form.
    pub scale: i64,
}

impl StarParams {
    pub fn new(k: K, prime: GoldenPrime) -> Self {
        StarParams { k, prime, scale: 1 }
    }

    pub fn with_scale(k: K, prime: GoldenPrime, scale: i64) -> Result<Self, StarError> {
        if scale != 1 && scale != 2 {
            return Err(StarError::BadScale(scale));
        }
        Ok(StarParams { k, prime, scale })
    }
}

/// A 4×4 matrix over Z[τ].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenMat(pub [[GoldenInt; 4]; 4]);

impl GoldenMat {
    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        GoldenMat(rows.map(|r| r.map(GoldenInt::int)))
    }

    pub fn identity() -> Self {
        GoldenMat::from_ints([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    }

    pub fn mul(&self, rhs: &GoldenMat) -> GoldenMat {
        let mut out = GoldenMat::from_ints([[0; 4]; 4]);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = GoldenInt::zero();
                for k in 0..4 {
                    acc = &acc + &(&self.0[i][k] * &rhs.0[k][j]);
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> GoldenMat {
        let mut out = self.clone();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].clone();
            }
        }
        out
    }

    pub fn scale(&self, s: &GoldenInt) -> GoldenMat {
        GoldenMat(self.0.clone().map(|r| r.map(|e| &e * s)))
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> GoldenInt {
        let rows: Vec<Vec<GoldenInt>> = self.0.iter().map(|r| r.to_vec()).collect();
        cofactor_det(&rows)
    }

    /// The 3×3 minor with row and column `i` deleted.
    pub fn minor_det(&self, i: usize) -> GoldenInt {
        let rows: Vec<Vec<GoldenInt>> = (0..4)
            .filter(|&r| r != i)
            .map(|r| (0..4).filter(|&c| c != i).map(|c| self.0[r][c].clone()).collect())
            .collect();
        cofactor_det(&rows)
    }

    pub fn reduce(&self, ctx: &FieldCtx) -> Mat4 {
        Mat4::from_elems(ctx, self.0.clone().map(|r| r.map(|e| ctx.reduce(&e))))
    }
}

fn cofactor_det(m: &[Vec<GoldenInt>]) -> GoldenInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = GoldenInt::zero();
    for (j, head) in m[0].iter().enumerate() {
        if head.is_zero() {
            continue;
        }
        let sub: Vec<Vec<GoldenInt>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, e)| e.clone()).collect()).collect();
        let term = head * &cofactor_det(&sub);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// The four reflections r0..r3 over Z[τ].
pub fn generator_matrices(k: K) -> [GoldenMat; 4] {
    let (z, o) = (GoldenInt::zero(), GoldenInt::one());
    let m1 = GoldenInt::int(-1);
    let t2 = GoldenInt::tau_pow(2);
    let rho = k.rho();
    let mut r0 = GoldenMat::identity();
    r0.0[0][0] = m1.clone();
    r0.0[0][1] = t2;
    let r1 = GoldenMat([
        [o.clone(), z.clone(), z.clone(), z.clone()],
        [o.clone(), m1.clone(), o.clone(), rho],
        [z.clone(), z.clone(), o.clone(), z.clone()],
        [z.clone(), z.clone(), z.clone(), o.clone()],
    ]);
    let mut r2 = GoldenMat::identity();
    r2.0[2][1] = o.clone();
    r2.0[2][2] = m1.clone();
    let mut r3 = GoldenMat::identity();
    r3.0[3][1] = o;
    r3.0[3][3] = m1;
    [r0, r1, r2, r3]
}

/// Gram matrix of the rescaled roots, multiplied by μ.
pub fn gram(k: K, scale: i64) -> GoldenMat {
    let t2 = GoldenInt::tau_pow(2);
    let rho = k.rho();
    let n = |x: i64| GoldenInt::int(x);
    let t2rho = &t2 * &rho;
    let z = GoldenInt::zero();
    let g = GoldenMat([
        [n(4), &n(-2) * &t2, z.clone(), z.clone()],
        [&n(-2) * &t2, &n(4) * &t2, &n(-2) * &t2, &n(-2) * &t2rho],
        [z.clone(), &n(-2) * &t2, &n(4) * &t2, z.clone()],
        [z.clone(), &n(-2) * &t2rho, z, &n(4) * &t2rho],
    ]);
    g.scale(&n(scale))
}

/// Cartan matrix `c_ij = 2 g_ij / g_ii`, computed by exact division in Z[τ].
pub fn cartan(k: K) -> Result<GoldenMat, StarError> {
    let g = gram(k, 1);
    let two = GoldenInt::int(2);
    let mut c = GoldenMat::identity();
    for i in 0..4 {
        for j in 0..4 {
            c.0[i][j] = (&two * &g.0[i][j]).div_exact(&g.0[i][i]).ok_or(StarError::NonIntegralCartan(i, j))?;
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetReport {
    pub k: K,
    pub det_gram: GoldenInt,
    pub det_cartan: GoldenInt,
    pub expected_gram: GoldenInt,
    pub expected_cartan: GoldenInt,
}

/// Closed forms: det g = 2⁶τ⁴ρ(1 − τ²ρ), det c = 2²τ⁻²(1 − τ²ρ).
pub fn expected_determinants(k: K) -> (GoldenInt, GoldenInt) {
    let rho = k.rho();
    let factor = &GoldenInt::one() - &(&GoldenInt::tau_pow(2) * &rho);
    let g = &(&GoldenInt::int(64) * &GoldenInt::tau_pow(4)) * &(&rho * &factor);
    let c = &(&GoldenInt::int(4) * &GoldenInt::tau_pow(-2)) * &factor;
    (g, c)
}

/// Compare cofactor determinants with the closed forms; a mismatch is an error.
pub fn det_identities(k: K) -> Result<DetReport, StarError> {
    if k == K::Inf {
        return Err(StarError::InfiniteK);
    }
    let det_gram = gram(k, 1).det();
    let det_cartan = cartan(k)?.det();
    let (expected_gram, expected_cartan) = expected_determinants(k);
    if det_gram != expected_gram {
        return Err(StarError::DeterminantMismatch {
            k,
            which: "det g",
            got: det_gram.to_string(),
            expected: expected_gram.to_string(),
        });
    }
    if det_cartan != expected_cartan {
        return Err(StarError::DeterminantMismatch {
            k,
            which: "det c",
            got: det_cartan.to_string(),
            expected: expected_cartan.to_string(),
        });
    }
    Ok(DetReport { k, det_gram, det_cartan, expected_gram, expected_cartan })
}

/// The six generator pairs in reporting order: m01, m12, m13, m02, m03, m23.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (1, 2), (1, 3), (0, 2), (0, 3), (2, 3)];

/// Coxeter exponent of the pair, `None` for the infinite branch.
pub fn coxeter_exponent(k: K, i: usize, j: usize) -> Option<u64> {
    match (i.min(j), i.max(j)) {
        (0, 1) => Some(5),
        (1, 2) => Some(3),
        (1, 3) => k.value(),
        _ => Some(2),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    /// Observed orders in [`PAIRS`] order.
    pub orders: [u64; 6],
    /// Pairs whose observed order differs from the Coxeter exponent.
    pub non_smooth: Vec<(usize, usize)>,
}

impl SmoothnessReport {
    pub fn smooth(&self) -> bool {
        self.non_smooth.is_empty()
    }

    pub fn order_of(&self, i: usize, j: usize) -> u64 {
        let key = (i.min(j), i.max(j));
        let idx = PAIRS.iter().position(|&p| p == key).expect("valid pair");
        self.orders[idx]
    }
}

#[derive(Clone, Debug)]
pub struct ReducedStar {
    pub gens: [Mat4; 4],
    pub smoothness: SmoothnessReport,
}

const PRODUCT_ORDER_CAP: u64 = 1 << 24;

/// Reduce r0..r3 into F_q and measure the pairwise product orders.
pub fn reduced_generators(k: K, ctx: &FieldCtx) -> ReducedStar {
    let gens = generator_matrices(k).map(|m| m.reduce(ctx));
    let smoothness = smoothness_of(&gens, k, ctx);
    ReducedStar { gens, smoothness }
}

pub fn smoothness_of(gens: &[Mat4; 4], k: K, ctx: &FieldCtx) -> SmoothnessReport {
    let mut orders = [0u64; 6];
    let mut non_smooth = Vec::new();
    for (slot, &(i, j)) in orders.iter_mut().zip(PAIRS.iter()) {
        let m = gens[i].mul(&gens[j], ctx);
        *slot = element_order(&m, PRODUCT_ORDER_CAP, ctx).unwrap_or(0);
        if coxeter_exponent(k, i, j) != Some(*slot) {
            non_smooth.push((i, j));
        }
    }
    SmoothnessReport { orders, non_smooth }
}

/// Reduced Gram matrix as a field matrix.
pub fn reduced_gram(k: K, scale: i64, ctx: &FieldCtx) -> Mat4 {
    gram(k, scale).reduce(ctx)
}

/// Entry of a Z[τ] matrix as an integer, when rational.
pub fn rational_entry(m: &GoldenMat, i: usize, j: usize) -> Option<BigInt> {
    let e = &m.0[i][j];
    e.is_rational().then(|| e.a.clone())
}
