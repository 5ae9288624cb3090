//! Batch classification over all primes up to a norm bound.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::cgroup::{verify_cgroup, StarGroup};
use crate::classify::{classify_rank4, table3_lookup};
use crate::error::{Error, Result};
use crate::golden::{primes_up_to_norm, GoldenPrime, PrimeClass};
use crate::group::{bsgs, enumerate_with_hint, GroupError};
use crate::star::{reduced_generators, StarParams, K};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Enumerated,
    Bsgs,
    Skipped,
}

/// A yes/no outcome that may not have been computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Check {
    Done(bool),
    Skipped(&'static str),
}

impl Check {
    const SKIPPED: Check = Check::Skipped("skipped");

    pub fn passed(self) -> Option<bool> {
        match self {
            Check::Done(b) => Some(b),
            Check::Skipped(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SurveyRow {
    pub k: String,
    pub prime: String,
    pub class: PrimeClass,
    pub q: u64,
    pub classification: String,
    pub predicted_order: Option<u128>,
    pub verified_order: Option<u128>,
    pub verify_mode: VerifyMode,
    pub cgroup: Check,
    pub smooth: bool,
    /// Agreement of the residue classifier with the congruence table.
    pub dual_path: Check,
    #[serde(skip)]
    sort_key: (u64, u64, String),
}

impl SurveyRow {
    pub fn order_matches(&self) -> Option<bool> {
        Some(self.verified_order? == self.predicted_order?)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SurveySummary {
    pub summary: bool,
    pub rows: usize,
    pub order_mismatches: usize,
    pub orders_skipped: usize,
    pub cgroup_failures: usize,
    pub cgroup_skipped: usize,
    pub dual_path_disagreements: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct SurveyConfig {
    pub max_norm: u64,
    pub cap: usize,
    pub check_cgroup: bool,
}

fn verify_order(params: &StarParams, predicted: Option<u128>, cap: usize) -> Result<(Option<u128>, VerifyMode)> {
    let star = StarGroup::new(params, cap)?;
    if let Some(n) = predicted.filter(|&n| n <= cap as u128) {
        match enumerate_with_hint(&star.ctx, &star.gens, cap, n as usize) {
            Ok(g) => return Ok((Some(g.order), VerifyMode::Enumerated)),
            Err(GroupError::OverCap(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    match bsgs(&star.ctx, &star.gens) {
        Ok(g) => Ok((Some(g.order), VerifyMode::Bsgs)),
        Err(_) => Ok((None, VerifyMode::Skipped)),
    }
}

pub fn survey_row(k: K, prime: &GoldenPrime, cfg: &SurveyConfig) -> Result<SurveyRow> {
    let params = StarParams::new(k, prime.clone());
    let ctx = crate::field::build_field(prime)?;
    let smooth = reduced_generators(k, &ctx).smoothness.smooth();
    let (classification, predicted) = match classify_rank4(&params) {
        Ok(c) => (c.label(), Some(c.predicted_order)),
        Err(e) => (format!("unclassified: {e}"), None),
    };
    let dual_path = match (classify_rank4(&params), table3_lookup(&params)) {
        (Ok(a), Ok(b)) => Check::Done(a.family == b.family),
        _ => Check::Skipped("n/a"),
    };
    let (verified_order, verify_mode) = verify_order(&params, predicted, cfg.cap)?;
    let cgroup = if !cfg.check_cgroup {
        Check::SKIPPED
    } else {
        match verify_cgroup(&params, cfg.cap) {
            Ok(r) => Check::Done(r.is_cgroup()),
            Err(Error::Group(GroupError::OverCap(_))) => Check::SKIPPED,
            Err(e) => return Err(e),
        }
    };
    let kv = k.value().unwrap_or(u64::MAX);
    Ok(SurveyRow {
        k: k.to_string(),
        prime: prime.to_string(),
        class: prime.klass,
        q: prime.q,
        classification,
        predicted_order: predicted,
        verified_order,
        verify_mode,
        cgroup,
        smooth,
        dual_path,
        sort_key: (kv, prime.q, prime.to_string()),
    })
}

/// Rows for every (k, prime) pair, in a fixed order.
pub fn run_survey(ks: &[K], cfg: &SurveyConfig) -> Result<Vec<SurveyRow>> {
    let primes = primes_up_to_norm(cfg.max_norm);
    let jobs: Vec<(K, &GoldenPrime)> = ks.iter().flat_map(|&k| primes.iter().map(move |p| (k, p))).collect();
    let mut rows = jobs.into_par_iter().map(|(k, p)| survey_row(k, p, cfg)).collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.sort_key.cmp(&b.sort_key));
    Ok(rows)
}

pub fn summarize(rows: &[SurveyRow]) -> SurveySummary {
    let mut s = SurveySummary { summary: true, rows: rows.len(), ..Default::default() };
    for r in rows {
        match r.order_matches() {
            Some(false) => s.order_mismatches += 1,
            None => s.orders_skipped += 1,
            _ => {}
        }
        match r.cgroup.passed() {
            Some(false) => s.cgroup_failures += 1,
            None => s.cgroup_skipped += 1,
            _ => {}
        }
        if r.dual_path.passed() == Some(false) {
            s.dual_path_disagreements += 1;
        }
    }
    s
}

/// One JSON object per row, then the summary.
pub fn write_jsonl<W: Write>(rows: &[SurveyRow], mut out: W) -> std::io::Result<SurveySummary> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    let summary = summarize(rows);
    serde_json::to_writer(&mut out, &summary)?;
    out.write_all(b"\n")?;
    Ok(summary)
}
