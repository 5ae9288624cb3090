//! Type of the reduced group and of its rank-3 distinguished subgroups.
//!
//! Two independent routes are provided: [`classify_rank4`] evaluates
//! residue symbols of the Gram determinant and root norms, while
//! [`table3_lookup`] reads the answer from congruence conditions on q and
//! on the coefficients of `p = c + dτ`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::field::{build_field, FieldCtx, FieldError};
use crate::golden::{golden_legendre, rational_legendre, GoldenInt, GoldenPrime, PrimeClass, RingError};
use crate::matrix::{element_order, Mat4};
use crate::star::{generator_matrices, gram, smoothness_of, GoldenMat, StarParams, K, PAIRS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("Gram form is singular modulo {prime} for k = {k} outside the known exceptional cases")]
    SingularForm { k: K, prime: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("torus check failed: {0}")]
    TorusMismatch(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoxeterName {
    A3,
    B3,
    H3,
}

impl CoxeterName {
    pub fn order(self) -> u128 {
        match self {
            CoxeterName::A3 => 24,
            CoxeterName::B3 => 48,
            CoxeterName::H3 => 120,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    FullOrthogonal { n: u8, q: u64, eps: i8 },
    O1 { n: u8, q: u64, eps: i8 },
    O2 { n: u8, q: u64, eps: i8 },
    CoxeterReduction(CoxeterName),
    /// Automorphism group of the regular torus {3,6}_(s,0).
    Torus(u64),
    Exceptional { label: String, order: u128 },
}

impl Family {
    /// Orders of the orthogonal groups and their reflection subgroups.
    pub fn order(&self) -> u128 {
        let full = |n: u8, q: u64, eps: i8| -> u128 {
            let q = q as u128;
            match (n, eps) {
                (3, _) => 2 * q * (q * q - 1),
                (4, 1) => 2 * q * q * (q * q - 1) * (q * q - 1),
                (4, -1) => 2 * q * q * (q * q + 1) * (q * q - 1),
                _ => panic!("no orthogonal group O({n},{q},{eps})"),
            }
        };
        match *self {
            Family::FullOrthogonal { n, q, eps } => full(n, q, eps),
            Family::O1 { n, q, eps } | Family::O2 { n, q, eps } => full(n, q, eps) / 2,
            Family::CoxeterReduction(c) => c.order(),
            Family::Torus(s) => 12 * (s as u128) * (s as u128),
            Family::Exceptional { order, .. } => order,
        }
    }

    fn exceptional(label: &str, order: u128) -> Family {
        Family::Exceptional { label: label.to_string(), order }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FullOrthogonal { n, q, eps } => write!(f, "O({n},{q},{eps})"),
            Family::O1 { n, q, eps } => write!(f, "O1({n},{q},{eps})"),
            Family::O2 { n, q, eps } => write!(f, "O2({n},{q},{eps})"),
            Family::CoxeterReduction(c) => write!(f, "{c:?}"),
            Family::Torus(s) => write!(f, "[3,6]_({s},0)"),
            Family::Exceptional { label, .. } => write!(f, "Exceptional {label}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub family: Family,
    pub predicted_order: u128,
    pub epsilon: i8,
    pub delta: i8,
    pub smooth: bool,
}

impl Classification {
    fn new(family: Family, epsilon: i8, delta: i8, smooth: bool) -> Self {
        let predicted_order = family.order();
        Classification { family, predicted_order, epsilon, delta, smooth }
    }

    pub fn label(&self) -> String {
        self.family.to_string()
    }
}

fn require_odd(p: &GoldenPrime) -> Result<(), ClassifyError> {
    if p.is_odd() {
        Ok(())
    } else {
        Err(ClassifyError::Ring(RingError::EvenPrime))
    }
}

fn finite(k: K) -> Result<u64, ClassifyError> {
    k.value().ok_or_else(|| ClassifyError::Unsupported("classification is defined for k = 3, 4, 5, 6".into()))
}

/// ε = (det g / p) for the form scaled by μ.
pub fn epsilon(k: K, p: &GoldenPrime, scale: i64) -> Result<i8, ClassifyError> {
    require_odd(p)?;
    Ok(golden_legendre(&gram(k, scale).det(), p)?)
}

/// δ = (μ·ρ_k / p), the residue status of the v3 root norm.
pub fn delta(k: K, p: &GoldenPrime, scale: i64) -> Result<i8, ClassifyError> {
    require_odd(p)?;
    Ok(golden_legendre(&(&GoldenInt::int(scale) * &k.rho()), p)?)
}

fn is_k6_at_three(k: K, p: &GoldenPrime) -> bool {
    k == K::K6 && p.is_associate_of(3)
}

fn smoothness(k: K, p: &GoldenPrime, subset: &[usize]) -> Result<bool, ClassifyError> {
    let ctx = build_field(p)?;
    let gens = generator_matrices(k).map(|m| m.reduce(&ctx));
    let rep = smoothness_of(&gens, k, &ctx);
    Ok(rep.non_smooth.iter().all(|(i, j)| !(subset.contains(i) && subset.contains(j))))
}

/// Residues of the root norms `g_ii` for the listed roots.
fn root_residues(g: &GoldenMat, p: &GoldenPrime, roots: &[usize]) -> Result<Vec<i8>, ClassifyError> {
    roots.iter().map(|&i| Ok(golden_legendre(&g.0[i][i], p)?)).collect()
}

/// O1 when every root norm is a square, O2 when none is, the full group otherwise.
fn reflection_family(residues: &[i8], n: u8, q: u64, eps: i8) -> Family {
    if residues.iter().all(|&r| r == 1) {
        Family::O1 { n, q, eps }
    } else if residues.iter().all(|&r| r == -1) {
        Family::O2 { n, q, eps }
    } else {
        Family::FullOrthogonal { n, q, eps }
    }
}

/// Type of G^p via residue symbols.
pub fn classify_rank4(params: &StarParams) -> Result<Classification, ClassifyError> {
    let StarParams { k, prime: p, scale } = params;
    let k = *k;
    finite(k)?;
    let all = [0, 1, 2, 3];
    if p.klass == PrimeClass::Even {
        return Ok(Classification::new(Family::exceptional("C2^4:A5", 960), 0, 0, smoothness(k, p, &all)?));
    }
    if k == K::K5 && p.klass == PrimeClass::ClassI {
        return Ok(Classification::new(Family::exceptional("C5^3:(C2xA5)", 15_000), 0, 1, smoothness(k, p, &all)?));
    }
    if is_k6_at_three(k, p) {
        return Ok(Classification::new(Family::exceptional("3-singular", 174_960), 0, 0, smoothness(k, p, &all)?));
    }
    let g = gram(k, *scale);
    let eps = golden_legendre(&g.det(), p)?;
    if eps == 0 {
        return Err(ClassifyError::SingularForm { k, prime: p.to_string() });
    }
    let residues = root_residues(&g, p, &all)?;
    let family = reflection_family(&residues, 4, p.q, eps);
    Ok(Classification::new(family, eps, delta(k, p, *scale)?, smoothness(k, p, &all)?))
}

fn torus_size(p: &GoldenPrime) -> u64 {
    match p.klass {
        PrimeClass::ClassI => 5,
        PrimeClass::ClassII | PrimeClass::Even => p.r,
        PrimeClass::ClassIII => p.q,
    }
}

/// Type of the distinguished subgroup Γ_i, i ∈ {0, 2, 3}.
pub fn classify_rank3(i: usize, params: &StarParams) -> Result<Classification, ClassifyError> {
    let StarParams { k, prime: p, scale } = params;
    let k = *k;
    finite(k)?;
    let subset: Vec<usize> = (0..4).filter(|&j| j != i).collect();
    let smooth = smoothness(k, p, &subset)?;
    if p.klass == PrimeClass::Even {
        // structure read off from enumeration over F_4
        let family = match (i, k) {
            (0, K::K5) => Family::exceptional("A5", 60),
            (0, _) => Family::exceptional("S4", 24),
            (2, K::K4 | K::K5) => Family::exceptional("(C2^4:C5):C2", 160),
            (2, _) | (3, _) => Family::exceptional("A5", 60),
            _ => return Err(ClassifyError::Unsupported(format!("no rank-3 classification for Γ_{i}"))),
        };
        return Ok(Classification::new(family, 0, 0, smooth));
    }
    match i {
        3 => Ok(Classification::new(Family::CoxeterReduction(CoxeterName::H3), 0, 0, smooth)),
        0 => {
            let family = match k {
                K::K3 => Family::CoxeterReduction(CoxeterName::A3),
                K::K4 => Family::CoxeterReduction(CoxeterName::B3),
                K::K5 => Family::CoxeterReduction(CoxeterName::H3),
                _ => Family::Torus(torus_size(p)),
            };
            Ok(Classification::new(family, 0, 0, smooth))
        }
        2 => {
            if is_k6_at_three(k, p) {
                // D_n has order 2n here, as in (C3 x C3):D6 = Γ_0 of order 108
                return Ok(Classification::new(Family::exceptional("C3^4:D10", 1620), 0, 0, smooth));
            }
            let g = gram(k, *scale);
            if golden_legendre(&g.minor_det(2), p)? == 0 {
                return Err(ClassifyError::SingularForm { k, prime: p.to_string() });
            }
            let residues = root_residues(&g, p, &[0, 1, 3])?;
            let family = reflection_family(&residues, 3, p.q, 0);
            Ok(Classification::new(family, 0, residues[2], smooth))
        }
        _ => Err(ClassifyError::Unsupported(format!("no rank-3 classification for Γ_{i}"))),
    }
}

fn leg(a: i64, m: u64) -> i8 {
    rational_legendre(&BigInt::from(a), m).expect("odd prime modulus")
}

/// Classification read from the congruence table, without Gram determinants.
pub fn table3_lookup(params: &StarParams) -> Result<Classification, ClassifyError> {
    let StarParams { k, prime: p, scale } = params;
    let k = *k;
    finite(k)?;
    require_odd(p)?;
    if *scale != 1 {
        return Err(ClassifyError::Unsupported("the congruence table assumes the unscaled form".into()));
    }
    let q = p.q;
    let o1 = |eps: i8| Family::O1 { n: 4, q, eps };
    let full = |eps: i8| Family::FullOrthogonal { n: 4, q, eps };
    let family = match p.klass {
        PrimeClass::ClassI => match k {
            K::K3 => o1(-1),
            K::K4 => full(1),
            K::K5 => Family::exceptional("C5^3:(C2xA5)", 15_000),
            _ => full(-1),
        },
        PrimeClass::ClassII => {
            let r20 = p.r % 20;
            let low = r20 == 3 || r20 == 7;
            match k {
                K::K3 | K::K4 => o1(if low { -1 } else { 1 }),
                K::K5 => o1(if low { 1 } else { -1 }),
                _ if p.r == 3 => Family::exceptional("3-singular", 174_960),
                _ => o1(1),
            }
        }
        PrimeClass::ClassIII => {
            let c = p.c().to_i64().expect("small prime");
            let d = p.d().to_i64().expect("small prime");
            let qi = q as i64;
            let (c, d) = (c.rem_euclid(qi), d.rem_euclid(qi));
            match k {
                K::K3 => o1(leg(c * d, q)),
                K::K4 => {
                    let eps = leg(2 * c * d, q);
                    if matches!(q % 40, 11 | 19 | 21 | 29) {
                        full(eps)
                    } else {
                        o1(eps)
                    }
                }
                K::K5 => o1(leg(2 * c * d + d * d, q)),
                _ => match q % 60 {
                    19 | 31 => full(1),
                    29 | 41 => full(-1),
                    1 | 49 => o1(1),
                    _ => o1(-1),
                },
            }
        }
        PrimeClass::Even => unreachable!("checked odd"),
    };
    let (eps, delta) = match &family {
        Family::O1 { eps, .. } => (*eps, 1),
        Family::FullOrthogonal { eps, .. } => (*eps, -1),
        _ => (0, 0),
    };
    Ok(Classification::new(family, eps, delta, smoothness(k, p, &[0, 1, 2, 3])?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusReport {
    pub s: u64,
    pub order_x: u64,
    pub order_x_inv_y: u64,
    /// Number of exponents at which both closed forms were compared.
    pub powers_checked: u64,
}

/// x = r1r3r1r3r1r2 and y = r3r1r3r2r1r2 for k = 6.
pub fn torus_words() -> (GoldenMat, GoldenMat) {
    let [_, r1, r2, r3] = generator_matrices(K::K6);
    let word = |w: &[&GoldenMat]| w.iter().fold(GoldenMat::identity(), |acc, m| acc.mul(m));
    (word(&[&r1, &r3, &r1, &r3, &r1, &r2]), word(&[&r3, &r1, &r3, &r2, &r1, &r2]))
}

/// Closed form of xˢ.
pub fn x_power_closed_form(s: i64) -> GoldenMat {
    GoldenMat::from_ints([
        [1, 0, 0, 0],
        [4 * s * s, 1 + 2 * s, -4 * s, 0],
        [2 * s * s - 2 * s, s, 1 - 2 * s, 0],
        [2 * s * s, s, -2 * s, 1],
    ])
}

/// Closed form of (x⁻¹y)ˢ.
pub fn x_inv_y_power_closed_form(s: i64) -> GoldenMat {
    GoldenMat::from_ints([
        [1, 0, 0, 0],
        [4 * s * s, 1 - 4 * s, 2 * s, 6 * s],
        [2 * s * s + s, -2 * s, 1 + s, 3 * s],
        [2 * s * s + s, -2 * s, s, 1 + 3 * s],
    ])
}

/// Orders of x and x⁻¹y modulo p, and agreement of their powers with the closed forms.
pub fn torus_power_check(p: &GoldenPrime) -> Result<TorusReport, ClassifyError> {
    require_odd(p)?;
    if p.is_associate_of(3) {
        return Err(ClassifyError::Unsupported("torus check excludes associates of 3".into()));
    }
    let ctx: FieldCtx = build_field(p)?;
    let (x, y) = torus_words();
    let xm = x.reduce(&ctx);
    let xinv = xm.inv(&ctx).map_err(|e| ClassifyError::TorusMismatch(e.to_string()))?;
    let w = xinv.mul(&y.reduce(&ctx), &ctx);
    let s = torus_size(p);
    let cap = 4 * s + 4;
    let order = |m: &Mat4| element_order(m, cap, &ctx).map_err(|e| ClassifyError::TorusMismatch(e.to_string()));
    let (order_x, order_x_inv_y) = (order(&xm)?, order(&w)?);
    let (mut px, mut pw) = (Mat4::IDENTITY, Mat4::IDENTITY);
    for t in 1..=s {
        px = px.mul(&xm, &ctx);
        pw = pw.mul(&w, &ctx);
        if x_power_closed_form(t as i64).reduce(&ctx) != px {
            return Err(ClassifyError::TorusMismatch(format!("x^{t} differs from its closed form")));
        }
        if x_inv_y_power_closed_form(t as i64).reduce(&ctx) != pw {
            return Err(ClassifyError::TorusMismatch(format!("(x^-1 y)^{t} differs from its closed form")));
        }
    }
    if order_x != s || order_x_inv_y != s {
        return Err(ClassifyError::TorusMismatch(format!(
            "orders ({order_x}, {order_x_inv_y}) differ from s = {s}"
        )));
    }
    Ok(TorusReport { s, order_x, order_x_inv_y, powers_checked: s })
}

/// The Coxeter string of a rank-3 subgroup, for cell signatures.
pub fn subgroup_string(omit: usize) -> [(usize, usize); 2] {
    match omit {
        0 => [(1, 2), (1, 3)],
        2 => [(0, 1), (1, 3)],
        3 => [(0, 1), (1, 2)],
        _ => [PAIRS[0], PAIRS[1]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::primes_up_to_norm;

    fn params(k: K, s: &str) -> StarParams {
        StarParams::new(k, s.parse().unwrap())
    }

    #[test]
    fn order_formulas() {
        assert_eq!(Family::FullOrthogonal { n: 4, q: 5, eps: 1 }.order(), 28_800);
        assert_eq!(Family::FullOrthogonal { n: 4, q: 5, eps: -1 }.order(), 31_200);
        assert_eq!(Family::O1 { n: 4, q: 5, eps: -1 }.order(), 15_600);
        assert_eq!(Family::O1 { n: 4, q: 11, eps: -1 }.order(), 1_771_440);
        assert_eq!(Family::O1 { n: 4, q: 9, eps: -1 }.order(), 531_360);
        assert_eq!(Family::FullOrthogonal { n: 3, q: 5, eps: 0 }.order(), 240);
        assert_eq!(Family::Torus(11).order(), 1452);
    }

    #[test]
    fn epsilon_delta_class_one_k6() {
        let p = GoldenPrime::sqrt5();
        assert_eq!(epsilon(K::K6, &p, 1), Ok(-1));
        assert_eq!(delta(K::K6, &p, 1), Ok(-1));
    }

    #[test]
    fn delta_trivial_for_k3_k5() {
        for p in primes_up_to_norm(200).into_iter().filter(|p| p.is_odd()) {
            assert_eq!(delta(K::K3, &p, 1), Ok(1));
            assert_eq!(delta(K::K5, &p, 1), Ok(1));
            for k in K::FINITE {
                assert_eq!(epsilon(k, &p, 2), epsilon(k, &p, 1));
            }
        }
    }

    #[test]
    fn rank4_examples() {
        let c = classify_rank4(&params(K::K3, "-1+2t")).unwrap();
        assert_eq!(c.family, Family::O1 { n: 4, q: 5, eps: -1 });
        let c = classify_rank4(&params(K::K4, "-1+2t")).unwrap();
        assert_eq!(c.family, Family::FullOrthogonal { n: 4, q: 5, eps: 1 });
        assert_eq!(c.predicted_order, 28_800);
        let scaled = StarParams::with_scale(K::K3, GoldenPrime::sqrt5(), 2).unwrap();
        assert_eq!(classify_rank4(&scaled).unwrap().family, Family::O2 { n: 4, q: 5, eps: -1 });
        let c = classify_rank4(&params(K::K5, "-1+2t")).unwrap();
        assert_eq!(c.label(), "Exceptional C5^3:(C2xA5)");
        assert!(classify_rank4(&params(K::Inf, "-1+2t")).is_err());
    }

    #[test]
    fn rank4_class_three_mod_60() {
        let mut hits = 0;
        for p in primes_up_to_norm(200).into_iter().filter(|p| p.klass == PrimeClass::ClassIII && p.q % 60 == 29) {
            let c = classify_rank4(&StarParams::new(K::K6, p)).unwrap();
            assert!(matches!(c.family, Family::FullOrthogonal { n: 4, eps: -1, .. }));
            hits += 1;
        }
        assert!(hits > 0);
    }

    #[test]
    fn rank3_examples() {
        let c = classify_rank3(0, &params(K::K6, "3+1t")).unwrap();
        assert_eq!((c.family.clone(), c.predicted_order), (Family::Torus(11), 1452));
        let c = classify_rank3(2, &params(K::K4, "-1+2t")).unwrap();
        assert_eq!((c.family.clone(), c.predicted_order), (Family::FullOrthogonal { n: 3, q: 5, eps: 0 }, 240));
        let c = classify_rank3(2, &params(K::K5, "-1+2t")).unwrap();
        assert_eq!(c.family, Family::O1 { n: 3, q: 5, eps: 0 });
        for s in ["-1+2t", "3", "7", "3+1t"] {
            let c = classify_rank3(3, &params(K::K4, s)).unwrap();
            assert_eq!(c.predicted_order, 120);
        }
        assert_eq!(classify_rank3(2, &params(K::K6, "3")).unwrap().predicted_order, 1620);
        assert_eq!(classify_rank3(0, &params(K::K6, "3")).unwrap().predicted_order, 108);
    }

    #[test]
    fn table_rows() {
        // 13 ≡ 13 (mod 20)
        let c = table3_lookup(&params(K::K3, "13")).unwrap();
        assert_eq!(c.family, Family::O1 { n: 4, q: 169, eps: 1 });
        let c = table3_lookup(&params(K::K6, "3+1t")).unwrap();
        assert_eq!(c.family, Family::O1 { n: 4, q: 11, eps: -1 });
        assert!(table3_lookup(&params(K::K3, "2")).is_err());
    }

    #[test]
    fn closed_forms_exact_over_integers() {
        let (x, y) = torus_words();
        let mut px = GoldenMat::identity();
        for s in 1..=12 {
            px = px.mul(&x);
            assert_eq!(px, x_power_closed_form(s), "s = {s}");
        }
        // x⁻¹ = closed form at s = −1
        let x_inv = x_power_closed_form(-1);
        assert_eq!(x_inv.mul(&x), GoldenMat::identity());
        let w = x_inv.mul(&y);
        let mut pw = GoldenMat::identity();
        for s in 1..=12 {
            pw = pw.mul(&w);
            assert_eq!(pw, x_inv_y_power_closed_form(s), "s = {s}");
        }
    }

    #[test]
    fn torus_orders() {
        for (s, expect) in [("-1+2t", 5), ("7", 7), ("3+1t", 11)] {
            let r = torus_power_check(&s.parse().unwrap()).unwrap();
            assert_eq!((r.s, r.order_x, r.order_x_inv_y), (expect, expect, expect));
        }
        assert!(torus_power_check(&"3".parse().unwrap()).is_err());
    }
}
