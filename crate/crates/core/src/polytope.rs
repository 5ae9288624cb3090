//! Coset counts for the alternating semiregular 4-polytope built from G^p.
//!
//! Only rings 0 and 2 are supported. Faces are right cosets Γ g of distinguished
//! subgroups; two faces are incident when their cosets intersect.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cgroup::StarGroup;
use crate::classify::{classify_rank4, subgroup_string};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::group::{enumerate_with_hint, ElementSet, GroupHandle};
use crate::matrix::Mat4;
use crate::star::{smoothness_of, StarParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrbitClass {
    Regular,
    TwoOrbit,
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitClass::Regular => "Regular",
            OrbitClass::TwoOrbit => "TwoOrbit",
        })
    }
}

/// Stabilizer order and the two product orders of a cell's rank-3 string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellSignature {
    pub order: u128,
    pub orders: (u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PolytopeStats {
    pub ring: usize,
    pub group_order: u128,
    pub vertices: u128,
    pub edges: u128,
    pub subfacets: u128,
    #[serde(rename = "cellsP")]
    pub cells_p: u128,
    #[serde(rename = "cellsQ")]
    pub cells_q: u128,
    #[serde(rename = "cellSignatureP")]
    pub cell_signature_p: CellSignature,
    #[serde(rename = "cellSignatureQ")]
    pub cell_signature_q: CellSignature,
    pub orbit_class: OrbitClass,
    /// How the orbit class was decided.
    pub orbit_class_basis: &'static str,
}

impl PolytopeStats {
    pub fn counts(&self) -> (u128, u128, u128, u128, u128) {
        (self.vertices, self.edges, self.subfacets, self.cells_p, self.cells_q)
    }

    pub fn to_table(&self) -> String {
        let sig = |s: &CellSignature| format!("({}, ({}, {}))", s.order, s.orders.0, s.orders.1);
        let rows = [
            ("ring", self.ring.to_string()),
            ("group order", self.group_order.to_string()),
            ("vertices", self.vertices.to_string()),
            ("edges", self.edges.to_string()),
            ("subfacets", self.subfacets.to_string()),
            ("cells P", self.cells_p.to_string()),
            ("cells Q", self.cells_q.to_string()),
            ("signature P", sig(&self.cell_signature_p)),
            ("signature Q", sig(&self.cell_signature_q)),
            ("orbit class", format!("{} ({})", self.orbit_class, self.orbit_class_basis)),
        ];
        let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
    }
}

/// Which distinguished subgroups play which role for a given ring.
#[derive(Clone, Copy, Debug)]
struct Roles {
    vertex: &'static [usize],
    edge: &'static [usize],
    subfacet: &'static [usize],
    cell_p: usize,
    cell_q: usize,
}

fn roles(ring: usize) -> Result<Roles> {
    match ring {
        2 => Ok(Roles { vertex: &[2], edge: &[1], subfacet: &[0, 3], cell_p: 3, cell_q: 0 }),
        0 => Ok(Roles { vertex: &[0], edge: &[1], subfacet: &[2, 3], cell_p: 3, cell_q: 2 }),
        _ => Err(Error::Unsupported(format!("ring {ring} (only 0 and 2 are supported)"))),
    }
}

fn index(total: u128, sub: u128, what: &str) -> Result<u128> {
    if sub == 0 || total % sub != 0 {
        return Err(Error::Unsupported(format!("|{what}| = {sub} does not divide {total}")));
    }
    Ok(total / sub)
}

pub fn face_counts(params: &StarParams, ring: usize, cap: usize) -> Result<PolytopeStats> {
    let r = roles(ring)?;
    let group_order = classify_rank4(params)?.predicted_order;
    let star = StarGroup::new(params, cap)?;
    let ord = |omit: &[usize]| star.distinguished(omit).map(|g| g.order);
    let smooth = smoothness_of(&star.gens, params.k, &star.ctx);
    let signature = |omit: usize| -> Result<CellSignature> {
        let [a, b] = subgroup_string(omit);
        Ok(CellSignature { order: ord(&[omit])?, orders: (smooth.order_of(a.0, a.1), smooth.order_of(b.0, b.1)) })
    };
    let cell_signature_p = signature(r.cell_p)?;
    let cell_signature_q = signature(r.cell_q)?;
    let orbit_class =
        if cell_signature_p == cell_signature_q { OrbitClass::Regular } else { OrbitClass::TwoOrbit };
    Ok(PolytopeStats {
        ring,
        group_order,
        vertices: index(group_order, ord(r.vertex)?, "vertex stabilizer")?,
        edges: index(group_order, ord(r.edge)?, "edge stabilizer")?,
        subfacets: index(group_order, ord(r.subfacet)?, "subfacet stabilizer")?,
        cells_p: index(group_order, cell_signature_p.order, "cell stabilizer P")?,
        cells_q: index(group_order, cell_signature_q.order, "cell stabilizer Q")?,
        cell_signature_p,
        cell_signature_q,
        orbit_class,
        orbit_class_basis: "surrogate: cell-signature equality",
    })
}

pub fn orbit_class(params: &StarParams, ring: usize, cap: usize) -> Result<OrbitClass> {
    Ok(face_counts(params, ring, cap)?.orbit_class)
}

/// Right cosets H g of an enumerated group, keyed by their minimal element.
pub struct Cosets {
    /// Coset index of each element of G, by position.
    pub label: Vec<u32>,
    /// Minimal element of each coset.
    pub keys: Vec<Mat4>,
    /// Some element of each coset.
    pub reps: Vec<usize>,
}

pub fn right_cosets(g: &ElementSet, h: &[Mat4], ctx: &FieldCtx) -> Cosets {
    const UNSET: u32 = u32::MAX;
    let mut label = vec![UNSET; g.len()];
    let mut keys = Vec::new();
    let mut reps = Vec::new();
    for (i, x) in g.elements().iter().enumerate() {
        if label[i] != UNSET {
            continue;
        }
        let id = keys.len() as u32;
        let mut key = *x;
        for y in h {
            let hx = y.mul(x, ctx);
            let pos = g.position(&hx).expect("subgroup of G");
            label[pos] = id;
            key = key.min(hx);
        }
        keys.push(key);
        reps.push(i);
    }
    Cosets { label, keys, reps }
}

/// For each coset A g, the number of distinct B-cosets meeting it.
fn meeting_counts(g: &ElementSet, a: &[Mat4], a_cosets: &Cosets, b_cosets: &Cosets, ctx: &FieldCtx) -> Vec<usize> {
    a_cosets
        .reps
        .par_iter()
        .map(|&rep| {
            let x = &g.elements()[rep];
            let hit: BTreeSet<u32> =
                a.iter().map(|y| b_cosets.label[g.position(&y.mul(x, ctx)).expect("in G")]).collect();
            hit.len()
        })
        .collect()
}

/// Distinct (P, Q) incidence patterns seen around edges and vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub edge_patterns: BTreeSet<(usize, usize)>,
    pub vertex_patterns: BTreeSet<(usize, usize)>,
    pub edge_count: usize,
    pub vertex_count: usize,
}

impl Incidence {
    /// The single pattern if every face of that kind looks the same.
    fn uniform(set: &BTreeSet<(usize, usize)>) -> Option<(usize, usize)> {
        (set.len() == 1).then(|| *set.iter().next().expect("nonempty"))
    }

    pub fn edge_pattern(&self) -> Option<(usize, usize)> {
        Self::uniform(&self.edge_patterns)
    }

    pub fn vertex_pattern(&self) -> Option<(usize, usize)> {
        Self::uniform(&self.vertex_patterns)
    }
}

fn elements_of(h: &GroupHandle) -> Vec<Mat4> {
    h.elements().expect("distinguished subgroups are enumerated").elements().to_vec()
}

pub fn incidence(params: &StarParams, ring: usize, cap: usize) -> Result<Incidence> {
    let r = roles(ring)?;
    let star = StarGroup::new(params, cap)?;
    let expected = classify_rank4(params)?.predicted_order;
    let whole = enumerate_with_hint(&star.ctx, &star.gens, cap, expected.min(cap as u128) as usize)?;
    incidence_in(&star.ctx, &whole, &star, r)
}

fn incidence_in(ctx: &Arc<FieldCtx>, whole: &GroupHandle, star: &StarGroup, r: Roles) -> Result<Incidence> {
    let g = whole.elements().expect("enumerated");
    let sub = |omit: &[usize]| star.distinguished(omit).map(|h| elements_of(&h));
    let (edge, vertex, p, q) = (sub(r.edge)?, sub(r.vertex)?, sub(&[r.cell_p])?, sub(&[r.cell_q])?);
    let (ec, vc) = (right_cosets(g, &edge, ctx), right_cosets(g, &vertex, ctx));
    let (pc, qc) = (right_cosets(g, &p, ctx), right_cosets(g, &q, ctx));
    let pattern = |a: &[Mat4], ac: &Cosets| -> BTreeSet<(usize, usize)> {
        let np = meeting_counts(g, a, ac, &pc, ctx);
        let nq = meeting_counts(g, a, ac, &qc, ctx);
        np.into_iter().zip(nq).collect()
    };
    Ok(Incidence {
        edge_patterns: pattern(&edge, &ec),
        vertex_patterns: pattern(&vertex, &vc),
        edge_count: ec.keys.len(),
        vertex_count: vc.keys.len(),
    })
}

/// Every edge meets two cells of each family.
pub fn edge_alternation_check(params: &StarParams, ring: usize, cap: usize) -> Result<bool> {
    Ok(incidence(params, ring, cap)?.edge_pattern() == Some((2, 2)))
}
