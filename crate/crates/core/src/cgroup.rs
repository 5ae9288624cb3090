//! Intersection-condition checks for the reduced star group.
//!
//! The rank-4 condition reduces to the three rank-3 distinguished
//! subgroups Γ_0, Γ_2, Γ_3 being C-groups together with
//! Γ_0 ∩ Γ_2 = Γ_{0,2}, Γ_0 ∩ Γ_3 = Γ_{0,3} and Γ_2 ∩ Γ_3 = Γ_{2,3}.
//! Only rank ≤ 3 subgroups are ever enumerated.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{build_field, FieldCtx};
use crate::golden::PrimeClass;
use crate::group::{bsgs, enumerate, intersect, same_group, GroupHandle};
use crate::matrix::{product, Mat4, Vec4};
use crate::star::{reduced_generators, StarParams, K};

/// Generator indices of Γ_S, the subgroup generated by all r_j with j ∉ omit.
fn kept(omit: &[usize]) -> Vec<usize> {
    (0..4).filter(|j| !omit.contains(j)).collect()
}

fn subgroup_name(omit: &[usize]) -> String {
    let idx: Vec<String> = omit.iter().map(|i| i.to_string()).collect();
    format!("G_{}", idx.join(","))
}

/// The reduced generators together with their field.
#[derive(Clone, Debug)]
pub struct StarGroup {
    pub ctx: Arc<FieldCtx>,
    pub gens: [Mat4; 4],
    pub cap: usize,
}

impl StarGroup {
    pub fn new(params: &StarParams, cap: usize) -> Result<Self> {
        let ctx = Arc::new(build_field(&params.prime)?);
        let gens = reduced_generators(params.k, &ctx).gens;
        Ok(StarGroup { ctx, gens, cap })
    }

    pub fn from_gens(ctx: Arc<FieldCtx>, gens: [Mat4; 4], cap: usize) -> Self {
        StarGroup { ctx, gens, cap }
    }

    /// Γ_omit, always enumerated.
    pub fn distinguished(&self, omit: &[usize]) -> Result<GroupHandle> {
        let gens: Vec<Mat4> = kept(omit).iter().map(|&j| self.gens[j]).collect();
        Ok(enumerate(&self.ctx, &gens, self.cap)?)
    }

    pub fn full_bsgs(&self) -> Result<GroupHandle> {
        Ok(bsgs(&self.ctx, &self.gens)?)
    }
}

/// Convenience wrapper for [`StarGroup::distinguished`].
pub fn distinguished(params: &StarParams, omit: &[usize], cap: usize) -> Result<GroupHandle> {
    if omit.is_empty() {
        return Err(Error::Unsupported("omit must be nonempty".into()));
    }
    StarGroup::new(params, cap)?.distinguished(omit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: String,
    /// Row-major packed entries.
    pub element: [u32; 16],
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    /// C-group condition for Γ_0, Γ_2, Γ_3.
    pub rank3_checks: [bool; 3],
    /// Γ_0 ∩ Γ_2 = Γ_{0,2}, Γ_0 ∩ Γ_3 = Γ_{0,3}, Γ_2 ∩ Γ_3 = Γ_{2,3}.
    pub rank4_checks: [bool; 3],
    pub witness: Option<Witness>,
    pub subgroup_orders: BTreeMap<String, u128>,
    /// Orders of Γ_0 ∩ Γ_2, Γ_0 ∩ Γ_3, Γ_2 ∩ Γ_3.
    pub intersection_orders: [u128; 3],
}

impl IntersectionReport {
    pub fn is_cgroup(&self) -> bool {
        self.rank3_checks.iter().chain(&self.rank4_checks).all(|&b| b)
    }
}

/// Outcome of comparing `A ∩ B` with the expected subgroup.
struct Meet {
    ok: bool,
    order: u128,
    witness: Option<Mat4>,
}

fn meet_equals(a: &GroupHandle, b: &GroupHandle, expected: &GroupHandle) -> Meet {
    let (small, large) = if a.order <= b.order { (a, b) } else { (b, a) };
    let inter = intersect(small, large);
    let set = inter.elements().expect("intersection is enumerated");
    let witness = set.elements().iter().find(|m| !expected.contains(m)).copied();
    let covers = expected.elements().is_none_or(|e| e.elements().iter().all(|m| inter.contains(m)));
    Meet { ok: witness.is_none() && covers, order: inter.order, witness }
}

/// Full intersection condition on a rank-3 subgroup given by three generator indices.
fn rank3_condition(star: &StarGroup, idx: [usize; 3]) -> Result<(bool, Option<Witness>)> {
    let ctx = &star.ctx;
    for &i in &idx {
        let g = star.gens[i];
        if g.is_identity() || !g.mul(&g, ctx).is_identity() {
            return Ok((false, Some(Witness { check: format!("r{i} is not an involution"), element: g.0 })));
        }
    }
    // proper subsets of the three generators
    let subsets: Vec<Vec<usize>> = (0u8..7)
        .map(|mask| idx.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &i)| i).collect())
        .collect();
    let mut groups = Vec::with_capacity(subsets.len());
    for s in &subsets {
        let gens: Vec<Mat4> = s.iter().map(|&i| star.gens[i]).collect();
        groups.push(enumerate(ctx, &gens, star.cap)?);
    }
    let find = |s: &[usize]| subsets.iter().position(|t| t == s).expect("subset present");
    for (a, sa) in subsets.iter().enumerate() {
        for (b, sb) in subsets.iter().enumerate().skip(a + 1) {
            let common: Vec<usize> = sa.iter().copied().filter(|i| sb.contains(i)).collect();
            if common == *sa || common == *sb {
                continue;
            }
            let m = meet_equals(&groups[a], &groups[b], &groups[find(&common)]);
            if !m.ok {
                let check = format!("<{sa:?}> ∩ <{sb:?}> ≠ <{common:?}>");
                let element = m.witness.unwrap_or(Mat4::IDENTITY).0;
                return Ok((false, Some(Witness { check, element })));
            }
        }
    }
    Ok((true, None))
}

const RANK3: [(usize, [usize; 3]); 3] = [(0, [1, 2, 3]), (2, [0, 1, 3]), (3, [0, 1, 2])];

/// C-group checks for Γ_0, Γ_2 and Γ_3.
pub fn verify_rank3_cgroups(star: &StarGroup) -> Result<([bool; 3], Option<Witness>)> {
    let mut out = [false; 3];
    let mut witness = None;
    for (slot, (_, idx)) in out.iter_mut().zip(RANK3) {
        let (ok, w) = rank3_condition(star, idx)?;
        *slot = ok;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok((out, witness))
}

/// Full verification of the intersection condition.
pub fn verify_star(star: &StarGroup) -> Result<IntersectionReport> {
    let (rank3_checks, mut witness) = verify_rank3_cgroups(star)?;
    let mut subgroup_orders = BTreeMap::new();
    let mut cache: BTreeMap<Vec<usize>, GroupHandle> = BTreeMap::new();
    for omit in [vec![0], vec![1], vec![2], vec![3], vec![0, 2], vec![0, 3], vec![2, 3]] {
        let g = star.distinguished(&omit)?;
        subgroup_orders.insert(subgroup_name(&omit), g.order);
        cache.insert(omit, g);
    }
    let mut rank4_checks = [false; 3];
    let mut intersection_orders = [0u128; 3];
    for (n, (i, j)) in [(0usize, 2usize), (0, 3), (2, 3)].into_iter().enumerate() {
        let m = meet_equals(&cache[&vec![i]], &cache[&vec![j]], &cache[&vec![i, j]]);
        rank4_checks[n] = m.ok;
        intersection_orders[n] = m.order;
        if !m.ok && witness.is_none() {
            let element = m.witness.unwrap_or(Mat4::IDENTITY).0;
            witness = Some(Witness { check: format!("G_{i} ∩ G_{j} ≠ G_{i},{j}"), element });
        }
    }
    Ok(IntersectionReport { rank3_checks, rank4_checks, witness, subgroup_orders, intersection_orders })
}

pub fn verify_cgroup(params: &StarParams, cap: usize) -> Result<IntersectionReport> {
    verify_star(&StarGroup::new(params, cap)?)
}

/// The replacement generator z for r2.
pub fn lemma41_generator(star: &StarGroup, k: K, i_exp: u64) -> Result<Mat4> {
    let ctx = &star.ctx;
    let [r0, r1, r2, r3] = star.gens;
    let conj = |a: &Mat4, b: &Mat4| a.conjugate_by(b, ctx).map_err(Error::from);
    match k {
        K::K4 => conj(&r3, &r2.mul(&r1, ctx)),
        K::K5 => conj(&r0, &product(&[r3, r1, r2], ctx).pow(5, ctx)),
        K::K6 => {
            let x = product(&[r1, r3, r1, r3, r1, r2], ctx);
            let y = product(&[r3, r1, r3, r2, r1, r2], ctx);
            conj(&r3, &x.pow(i_exp, ctx).mul(&y, ctx))
        }
        _ => Err(Error::Unsupported(format!("no replacement generator for k = {k}"))),
    }
}

/// Whether ⟨r0, r1, r2, r3⟩ = ⟨r0, r1, z, r3⟩, by stabilizer-chain orders and mutual membership.
pub fn lemma41_check(params: &StarParams, i_exp: u64, cap: usize) -> Result<bool> {
    let p = &params.prime;
    let k = params.k;
    if !matches!(k, K::K4 | K::K5 | K::K6) || !p.is_odd() {
        return Err(Error::Unsupported("replacement generators need k ∈ {4,5,6} and an odd prime".into()));
    }
    if (k == K::K5 && p.klass == PrimeClass::ClassI) || (k == K::K6 && p.is_associate_of(3)) {
        return Err(Error::Unsupported("the reduced group is not orthogonal here".into()));
    }
    let star = StarGroup::new(params, cap)?;
    let z = lemma41_generator(&star, k, i_exp)?;
    let [r0, r1, _, r3] = star.gens;
    let g = star.full_bsgs()?;
    let h = bsgs(&star.ctx, &[r0, r1, z, r3])?;
    Ok(same_group(&g, &h))
}

/// The −1 eigenvector of a reflection, normalized so its last nonzero coordinate is 1.
pub fn reflection_root(m: &Mat4, ctx: &FieldCtx) -> Option<Vec4> {
    let plus_one = m.add(&Mat4::IDENTITY, ctx);
    let ker = plus_one.kernel(ctx);
    if ker.len() != 1 {
        return None;
    }
    let v = ker[0];
    let lead = *v.iter().rev().find(|&&c| c != 0)?;
    let inv = ctx.pinv(lead).ok()?;
    Some(v.map(|c| ctx.pmul(c, inv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    fn star(k: K, p: &str) -> StarGroup {
        StarGroup::new(&StarParams::new(k, p.parse().unwrap()), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn dihedral_and_small_subgroups() {
        for k in K::FINITE {
            let s = star(k, "-1+2t");
            let kv = k.value().unwrap() as u128;
            assert_eq!(s.distinguished(&[0, 2]).unwrap().order, 2 * kv);
            assert_eq!(s.distinguished(&[2, 3]).unwrap().order, 10);
            assert_eq!(s.distinguished(&[1]).unwrap().order, 8);
            assert_eq!(s.distinguished(&[3]).unwrap().order, 120);
        }
        assert!(distinguished(&StarParams::new(K::K3, "2".parse().unwrap()), &[], 10).is_err());
    }

    #[test]
    fn rank3_pairwise_meets_are_r1() {
        let s = star(K::K3, "-1+2t");
        let r1 = s.gens[1];
        for (a, b) in [([0, 2], [0, 3]), ([0, 2], [2, 3]), ([0, 3], [2, 3])] {
            let ga = s.distinguished(&a).unwrap();
            let gb = s.distinguished(&b).unwrap();
            let i = intersect(&ga, &gb);
            assert_eq!(i.order, 2);
            assert!(i.contains(&r1));
        }
    }

    #[test]
    fn corrupted_generators_fail() {
        let s = star(K::K3, "-1+2t");
        let mut gens = s.gens;
        gens[3] = gens[1];
        let bad = StarGroup::from_gens(s.ctx.clone(), gens, DEFAULT_CAP);
        let (checks, witness) = verify_rank3_cgroups(&bad).unwrap();
        assert!(checks.iter().any(|&c| !c));
        assert!(witness.is_some());
        assert!(!verify_star(&bad).unwrap().is_cgroup());
    }

    #[test]
    fn k5_at_sqrt5_is_cgroup() {
        let r = verify_cgroup(&StarParams::new(K::K5, "-1+2t".parse().unwrap()), DEFAULT_CAP).unwrap();
        assert!(r.is_cgroup(), "{r:?}");
        assert_eq!(r.intersection_orders[0], 10);
    }

    #[test]
    fn replacement_root_k4() {
        for p in ["-1+2t", "3", "3+1t"] {
            let s = star(K::K4, p);
            let z = lemma41_generator(&s, K::K4, 0).unwrap();
            let root = reflection_root(&z, &s.ctx).unwrap();
            assert_eq!(root, [0, 2, 2, 1].map(|c| s.ctx.pack(s.ctx.from_int(c))), "p = {p}");
        }
    }
}
