//! Exhaustive verification over a catalog of small instances.

mod catalog;
mod suites;

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, Instance};
use crate::error::{invalid, Error, Result};
use crate::maps::FiniteMap;

pub use catalog::{
    all_partitions, build_catalog, restricted_growth_strings, two_generated_subgroups, Catalog,
    CatalogEntry, MAX_CATALOG_N,
};
pub use suites::{
    find_suite, suite_ids, Scope, SuiteDef, EXHAUSTIVE_PAIR_LIMIT, SAMPLED_PAIRS, SUITES,
};

use suites::{Env, Tally};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The suite does not apply to the instance.
    Skip,
}

/// Enough to rerun a failing check through the public operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance: Instance,
    /// The members involved; empty when the check concerns the whole instance.
    pub elements: Vec<FiniteMap>,
    pub detail: String,
}

/// One suite on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub instance: String,
    pub verdict: Verdict,
    pub checks: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Pairs whose characterization search hit a cap (decided by the oracle only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capped: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn checks(&self) -> u64 {
        self.records.iter().map(|r| r.checks).sum()
    }

    pub fn capped(&self) -> u64 {
        self.records.iter().filter_map(|r| r.capped).sum()
    }

    pub fn millis(&self) -> u64 {
        self.records.iter().map(|r| r.millis).sum()
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == verdict).count()
    }

    /// The same report with timings zeroed, for byte-level comparison.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.millis = 0;
        }
        r
    }

    /// Newline-delimited JSON, one record per line.
    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&serde_json::to_string(rec).expect("plain data"));
            out.push('\n');
        }
        out
    }

    /// One summary line, plus a line per failure.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<36} {} pass={} fail={} skip={} checks={}",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Skip),
            self.checks()
        );
        if self.capped() > 0 {
            let _ = write!(out, " capped={}", self.capped());
        }
        out.push('\n');
        for rec in self.failures() {
            let cx = rec.counterexample.as_ref();
            let _ = writeln!(
                out,
                "  {}: {} [{}]",
                rec.instance,
                cx.map_or("", |c| c.detail.as_str()),
                cx.map(|c| {
                    c.elements
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .unwrap_or_default()
            );
        }
        out
    }
}

/// A catalog with its members enumerated once, shared by every suite.
pub struct Harness {
    catalog: Catalog,
    ensembles: Vec<Ensemble>,
}

impl Harness {
    pub fn new(catalog: Catalog) -> Result<Self> {
        let ensembles = catalog
            .entries
            .par_iter()
            .map(|e| Ensemble::new(e.instance.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { catalog, ensembles })
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn run_suite(&self, id: &str) -> Result<Report> {
        let def = find_suite(id).ok_or_else(|| {
            invalid!(
                "unknown suite {id:?}; known suites: {}",
                suite_ids().collect::<Vec<_>>().join(", ")
            )
        })?;
        let records = self
            .catalog
            .entries
            .par_iter()
            .zip(&self.ensembles)
            .enumerate()
            .map(|(k, (entry, ens))| {
                let seed = self.catalog.seed ^ (k as u64).wrapping_mul(0x2545_f491_4f6c_dd1d);
                run_one(def, &entry.label, ens, None, seed)
            })
            .collect();
        Ok(Report {
            suite: id.to_string(),
            records,
        })
    }

    pub fn run_all(&self) -> Vec<Report> {
        suite_ids()
            .map(|id| self.run_suite(id).expect("registered"))
            .collect()
    }
}

fn run_one(
    def: &SuiteDef,
    label: &str,
    ens: &Ensemble,
    focus: Option<Vec<usize>>,
    seed: u64,
) -> Record {
    let start = Instant::now();
    let mut record = Record {
        suite: def.id.to_string(),
        instance: label.to_string(),
        verdict: Verdict::Skip,
        checks: 0,
        counterexample: None,
        capped: None,
        note: None,
        millis: 0,
    };
    if def.scope.applies(ens) {
        let mut tally = Tally::default();
        let env = Env { ens, focus, seed };
        if let Err(e) = (def.run)(&env, &mut tally) {
            tally
                .failure
                .get_or_insert((Vec::new(), format!("error: {e}")));
        }
        record.checks = tally.checks;
        record.capped = (tally.capped > 0).then_some(tally.capped);
        record.note = tally.note;
        record.verdict = Verdict::Pass;
        if let Some((elements, detail)) = tally.failure {
            record.verdict = Verdict::Fail;
            record.counterexample = Some(Counterexample {
                instance: ens.instance().clone(),
                elements: elements.iter().map(|&i| ens.member(i).clone()).collect(),
                detail,
            });
        }
    }
    record.millis = start.elapsed().as_millis() as u64;
    record
}

/// Runs one suite over a freshly built catalog.
pub fn run_suite(id: &str, catalog: &Catalog) -> Result<Report> {
    if find_suite(id).is_none() {
        return Err(invalid!("unknown suite {id:?}"));
    }
    Harness::new(catalog.clone())?.run_suite(id)
}

/// Reruns a suite on the counterexample's instance, restricted to its elements.
/// Returns the verdict the suite reaches there.
pub fn replay(id: &str, cx: &Counterexample) -> Result<Verdict> {
    let def = find_suite(id).ok_or_else(|| invalid!("unknown suite {id:?}"))?;
    let ens = Ensemble::new(cx.instance.clone())?;
    let focus = if cx.elements.is_empty() {
        None
    } else {
        Some(
            cx.elements
                .iter()
                .map(|f| ens.require_member(f))
                .collect::<Result<Vec<_>>>()?,
        )
    };
    let rec = run_one(def, "replay", &ens, focus, 0);
    if let Some(c) = rec
        .counterexample
        .as_ref()
        .filter(|c| c.detail.starts_with("error: "))
    {
        return Err(Error::Internal(c.detail.clone()));
    }
    Ok(rec.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        let c = build_catalog(1, 0).unwrap();
        assert!(matches!(
            run_suite("no-such-suite", &c),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn small_catalog_passes_everything() {
        let h = Harness::new(build_catalog(2, 3).unwrap()).unwrap();
        for report in h.run_all() {
            assert!(report.passed(), "{}", report.to_text());
        }
    }

    #[test]
    fn suite_ids_are_unique() {
        let mut ids: Vec<&str> = suite_ids().collect();
        let n = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn replay_reaches_the_same_verdict() {
        let h = Harness::new(build_catalog(2, 0).unwrap()).unwrap();
        let e = &h.catalog().entries[3];
        let ens = Ensemble::new(e.instance.clone()).unwrap();
        let cx = Counterexample {
            instance: e.instance.clone(),
            elements: vec![ens.member(0).clone(), ens.member(ens.len() - 1).clone()],
            detail: String::new(),
        };
        for id in suite_ids() {
            let v = replay(id, &cx).unwrap();
            assert_ne!(v, Verdict::Fail, "{id}");
        }
    }
}
