//! The verification suite: every identity and condition system run on one
//! group at one precision, collected into a report.

mod checks;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::{FiniteGroup, GroupInfoJson, SubgroupLattice};
use crate::padic::PrecisionContext;

pub use checks::image_lattice_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Additive,
    Multiplicative,
    Lattice,
}

/// Deliberate corruption, for exercising failure reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Injection {
    /// Shift one coefficient of one `beta_C` image.
    PhiTuple,
    /// Scale the trivial-subgroup entry of one `theta` image by `1 + p`.
    PsiTuple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub label: String,
    pub ctx: PrecisionContext,
    /// Units for the integrality, additivity and `omega` checks.
    pub units: usize,
    /// Units for the heavier per-subgroup identities.
    pub identity_units: usize,
    /// Random `Phi^G` members for the `v_G` comparison.
    pub tuples: usize,
    /// Units sampled for the image lattice.
    pub lattice_samples: usize,
    pub families: Vec<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inject: Option<Injection>,
}

impl SuiteConfig {
    pub fn new(label: &str, ctx: PrecisionContext) -> Self {
        SuiteConfig {
            label: label.to_string(),
            ctx,
            units: 100,
            identity_units: 20,
            tuples: 20,
            lattice_samples: 200,
            families: vec![Family::Additive, Family::Multiplicative, Family::Lattice],
            inject: None,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.units == 0 || self.identity_units == 0 || self.tuples == 0 || self.lattice_samples == 0 {
            return Err(Error::BadParams("sample counts must be at least 1".into()));
        }
        PrecisionContext::new(self.ctx.p, self.ctx.n_work, self.ctx.n_check, self.ctx.seed)?;
        if self.ctx.n_check < 3 {
            return Err(Error::InvalidPrecision("the lattice check needs n_check >= 3".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeStatus {
    Saturated,
    Unsaturated,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteWitness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subgroups: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub family: Family,
    pub passed: bool,
    pub samples: usize,
    /// Smallest certified agreement (in digits) over all comparisons.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_residual: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violated: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<SuiteWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<LatticeStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub label: String,
    pub group: GroupInfoJson,
    pub precision: PrecisionContext,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.precision;
        let _ = writeln!(
            s,
            "{} (order {}, p = {}), n_work = {}, n_check = {}, seed = {}",
            self.label, self.group.order, c.p, c.n_work, c.n_check, c.seed
        );
        for ch in &self.checks {
            let verdict = if ch.passed { "PASS" } else { "FAIL" };
            let _ = write!(s, "  {verdict}  {:<24} samples={}", ch.name, ch.samples);
            if let Some(r) = ch.min_residual {
                let _ = write!(s, " residual>={r}");
            }
            if let Some(st) = &ch.status {
                let _ = write!(s, " {}", if *st == LatticeStatus::Saturated { "saturated" } else { "unsaturated" });
            }
            if !ch.violated.is_empty() {
                let _ = write!(s, " violated={}", ch.violated.join(","));
            }
            if let Some(n) = &ch.note {
                let _ = write!(s, " ({n})");
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "  {}  in {:.2}s",
            if self.passed { "ALL PASS" } else { "FAILED" },
            self.wall_time.as_secs_f64()
        );
        s
    }
}

/// An error that aborted the suite, with the check that raised it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{check}: {error}")]
pub struct SuiteError {
    pub check: String,
    pub error: Error,
}

impl SuiteError {
    pub fn setup(error: Error) -> Self {
        SuiteError { check: "setup".into(), error }
    }
}

type CheckFn = fn(&checks::SuiteData<'_>) -> crate::Result<CheckResult>;

/// Runs every enabled check on `group`.
pub fn run_suite(group: FiniteGroup, config: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let start = Instant::now();
    config.validate().map_err(SuiteError::setup)?;
    if group.p() != config.ctx.p {
        return Err(SuiteError::setup(Error::BadParams(format!(
            "group is a {}-group but the context prime is {}",
            group.p(),
            config.ctx.p
        ))));
    }
    let info = group.to_info();
    let lat = SubgroupLattice::new(group).map_err(SuiteError::setup)?;
    let data = checks::SuiteData::prepare(&lat, config).map_err(|e| SuiteError { check: "sampling".into(), error: e })?;
    let selected: Vec<(&str, Family, CheckFn)> =
        checks::ALL.iter().copied().filter(|(_, f, _)| config.families.contains(f)).collect();
    let results: Vec<Result<CheckResult, SuiteError>> = selected
        .par_iter()
        .map(|&(name, family, f)| match f(&data) {
            Ok(r) => Ok(r),
            Err(e) => checks::as_failure(name, family, e),
        })
        .collect();
    let checks = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        schema: crate::SCHEMA.to_string(),
        label: config.label.clone(),
        group: info,
        precision: config.ctx,
        checks,
        passed,
        wall_time: start.elapsed(),
    })
}
