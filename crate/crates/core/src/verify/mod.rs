//! Manifest-driven verification: a JSON list of checks, each recomputed
//! from scratch and compared exactly against its expected value.
//!
//! ```json
//! { "checks": [
//!     { "kind": "LowIndexCount", "group": "Gamma", "index": 7, "expected_classes": 4,
//!       "notes": "free text" }
//! ] }
//! ```
//!
//! `group` is a catalog key or a `.grp` path relative to the manifest.
//! Class ordinals are 1-based positions in the canonical order returned by
//! [`low_index_subgroups`](crate::low_index::low_index_subgroups).

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{split_prime, FieldSpec};
use crate::intlinalg::{abelian_invariants, char_poly, mapping_torus_h1, parse_matrix, IntegerMatrix};
use crate::low_index::{low_index_subgroups_with, LowIndexOptions, SubgroupClassRecord};
use crate::permgrp::DEFAULT_ELEMENT_BUDGET;
use crate::presentations::{catalog, parse_presentation, CatalogKey, Presentation};
use crate::quotients::{count_epimorphisms, Target};
use crate::rewrite::{reidemeister_schreier, tietze_simplify, DEFAULT_TIETZE_EFFORT};

#[derive(thiserror::Error, Debug)]
pub enum VerifyError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("check {ordinal}: {message}")]
    Unresolved { ordinal: usize, message: String },
}

/// An integer that may exceed `u64`; written as a JSON number or string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigNumber {
    Small(u64),
    Text(String),
}

impl BigNumber {
    fn value(&self) -> Option<BigUint> {
        match self {
            BigNumber::Small(n) => Some(BigUint::from(*n)),
            BigNumber::Text(s) => s.trim().parse().ok(),
        }
    }
}

/// A matrix given by name (`phi_s`, `A`, `A6`) or as row-major integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRef {
    Name(String),
    Rows(Vec<Vec<i64>>),
}

impl MatrixRef {
    fn resolve(&self) -> Result<IntegerMatrix, String> {
        let text = match self {
            MatrixRef::Name(n) => n.clone(),
            MatrixRef::Rows(rows) => serde_json::to_string(rows).expect("integers serialize"),
        };
        parse_matrix(&text).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Check {
    LowIndexCount {
        group: String,
        index: usize,
        expected_classes: usize,
    },
    AqiOfClass {
        group: String,
        index: usize,
        class_ordinal: usize,
        expected_invariants: String,
    },
    AqiOfGroup {
        group: String,
        expected_invariants: String,
    },
    NestedLowIndex {
        group: String,
        outer_index: usize,
        outer_class_ordinal: usize,
        inner_index: usize,
        expected_classes: usize,
        expected_invariants_multiset: Vec<String>,
    },
    CosetImageOrder {
        group: String,
        index: usize,
        class_ordinal: usize,
        expected_order: BigNumber,
    },
    SimpleCore {
        group: String,
        index: usize,
        class_ordinal: usize,
        expected_simple: bool,
    },
    MappingTorusH1 {
        matrix: MatrixRef,
        power: u64,
        expected_invariants: String,
    },
    CharPoly {
        matrix: MatrixRef,
        expected_coeffs: Vec<i64>,
    },
    PrimeSplit {
        field: String,
        p: u64,
        /// `(residue degree, ramification)` pairs.
        expected_pattern: Vec<(usize, usize)>,
    },
    EpiClasses {
        group: String,
        target: String,
        aut_order: Option<u64>,
        expected_classes: u64,
    },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::LowIndexCount { .. } => "LowIndexCount",
            Check::AqiOfClass { .. } => "AqiOfClass",
            Check::AqiOfGroup { .. } => "AqiOfGroup",
            Check::NestedLowIndex { .. } => "NestedLowIndex",
            Check::CosetImageOrder { .. } => "CosetImageOrder",
            Check::SimpleCore { .. } => "SimpleCore",
            Check::MappingTorusH1 { .. } => "MappingTorusH1",
            Check::CharPoly { .. } => "CharPoly",
            Check::PrimeSplit { .. } => "PrimeSplit",
            Check::EpiClasses { .. } => "EpiClasses",
        }
    }

    /// Short human-readable subject, e.g. `Gamma index 7`.
    pub fn subject(&self) -> String {
        match self {
            Check::LowIndexCount { group, index, .. } => format!("{group} index {index}"),
            Check::AqiOfClass {
                group,
                index,
                class_ordinal,
                ..
            }
            | Check::CosetImageOrder {
                group,
                index,
                class_ordinal,
                ..
            }
            | Check::SimpleCore {
                group,
                index,
                class_ordinal,
                ..
            } => format!("{group} index {index} class {class_ordinal}"),
            Check::AqiOfGroup { group, .. } => group.clone(),
            Check::NestedLowIndex {
                group,
                outer_index,
                outer_class_ordinal,
                inner_index,
                ..
            } => format!("{group} index {outer_index} class {outer_class_ordinal} / index {inner_index}"),
            Check::MappingTorusH1 { matrix, power, .. } => format!("{} power {power}", matrix_label(matrix)),
            Check::CharPoly { matrix, .. } => matrix_label(matrix),
            Check::PrimeSplit { field, p, .. } => format!("{field} p={p}"),
            Check::EpiClasses { group, target, .. } => format!("{group} onto {target}"),
        }
    }

    fn groups(&self) -> Vec<&str> {
        match self {
            Check::LowIndexCount { group, .. }
            | Check::AqiOfClass { group, .. }
            | Check::AqiOfGroup { group, .. }
            | Check::NestedLowIndex { group, .. }
            | Check::CosetImageOrder { group, .. }
            | Check::SimpleCore { group, .. }
            | Check::EpiClasses { group, .. } => vec![group],
            _ => Vec::new(),
        }
    }

    /// The (group, index) low-index search this check reads from.
    fn table(&self) -> Option<(&str, usize)> {
        match self {
            Check::LowIndexCount { group, index, .. }
            | Check::AqiOfClass { group, index, .. }
            | Check::CosetImageOrder { group, index, .. }
            | Check::SimpleCore { group, index, .. } => Some((group, *index)),
            Check::NestedLowIndex { group, outer_index, .. } => Some((group, *outer_index)),
            _ => None,
        }
    }
}

fn matrix_label(m: &MatrixRef) -> String {
    match m {
        MatrixRef::Name(n) => n.clone(),
        MatrixRef::Rows(r) => serde_json::to_string(r).expect("integers serialize"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    #[serde(flatten)]
    pub check: Check,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationManifest {
    pub checks: Vec<ManifestEntry>,
}

impl VerificationManifest {
    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub ordinal: usize,
    pub kind: &'static str,
    pub subject: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn count(&self, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }

    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status == Status::Pass)
    }

    /// 0 when every check passes, 3 if any check errored, otherwise 1.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else if self.count(Status::Error) > 0 {
            3
        } else {
            1
        }
    }

    /// One line per check plus a summary; timing is appended only when
    /// `timing` is set, so untimed renderings are reproducible.
    pub fn render(&self, timing: bool) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&format!(
                "[{:>3}] {:<5} {} {}: expected {}, actual {}",
                o.ordinal, o.status, o.kind, o.subject, o.expected, o.actual
            ));
            if timing {
                out.push_str(&format!(" ({:.3} s)", o.elapsed.as_secs_f64()));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} checks: {} passed, {} failed, {} errors\n",
            self.outcomes.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Error)
        ));
        out
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Worker threads; 0 uses the global rayon pool.
    pub jobs: usize,
    /// Largest coset table (subgroup index) a check may build.
    pub max_cosets: usize,
    pub low_index: LowIndexOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 0,
            max_cosets: 1_000_000,
            low_index: LowIndexOptions::default(),
        }
    }
}

type Classes = Arc<Result<Vec<SubgroupClassRecord>, String>>;

struct Context {
    base: PathBuf,
    groups: HashMap<String, Arc<Presentation>>,
    options: VerifyOptions,
    low_index: Mutex<HashMap<(String, usize), Arc<OnceLock<Classes>>>>,
}

impl Context {
    fn group(&self, name: &str) -> Arc<Presentation> {
        self.groups[name].clone()
    }

    fn load_group(base: &Path, name: &str) -> Result<Presentation, String> {
        if let Ok(key) = name.parse::<CatalogKey>() {
            return Ok(catalog(key).clone());
        }
        let path = base.join(name);
        let text = fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        parse_presentation(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Low-index classes, computed once per (group, index) and shared.
    fn classes(&self, group: &str, index: usize) -> Classes {
        let cell = self
            .low_index
            .lock()
            .unwrap()
            .entry((group.to_string(), index))
            .or_default()
            .clone();
        cell.get_or_init(|| {
            if index > self.options.max_cosets {
                return Arc::new(Err(format!("index {index} exceeds max cosets {}", self.options.max_cosets)));
            }
            let p = self.group(group);
            Arc::new(low_index_subgroups_with(&p, index, index, &self.options.low_index).map_err(|e| e.to_string()))
        })
        .clone()
    }

    fn class(&self, group: &str, index: usize, ordinal: usize) -> Result<SubgroupClassRecord, String> {
        let classes = self.classes(group, index);
        let list = classes.as_ref().as_ref().map_err(Clone::clone)?;
        if ordinal == 0 || ordinal > list.len() {
            return Err(format!("class ordinal {ordinal} out of range (1..={})", list.len()));
        }
        Ok(list[ordinal - 1].clone())
    }
}

/// Loads and runs a manifest file; relative group paths resolve against
/// the manifest's directory.
pub fn run_manifest(path: &Path, options: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let text = fs::read_to_string(path).map_err(|source| VerifyError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let manifest = VerificationManifest::from_json(&text)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    run_checks(&manifest, &base, options)
}

/// Runs every check, never stopping at a failure. Reference errors (unknown
/// groups, fields, matrices or targets) are reported before any work.
pub fn run_checks(
    manifest: &VerificationManifest,
    base: &Path,
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let mut groups = HashMap::new();
    for (i, entry) in manifest.checks.iter().enumerate() {
        let unresolved = |message: String| VerifyError::Unresolved {
            ordinal: i + 1,
            message,
        };
        for g in entry.check.groups() {
            if !groups.contains_key(g) {
                let p = Context::load_group(base, g).map_err(unresolved)?;
                groups.insert(g.to_string(), Arc::new(p));
            }
        }
        match &entry.check {
            Check::MappingTorusH1 { matrix, .. } | Check::CharPoly { matrix, .. } => {
                matrix.resolve().map_err(unresolved)?;
            }
            Check::PrimeSplit { field, .. } => {
                field.parse::<FieldSpec>().map_err(|e| unresolved(e.to_string()))?;
            }
            Check::EpiClasses { target, .. } => {
                target.parse::<Target>().map_err(|e| unresolved(e.to_string()))?;
            }
            _ => {}
        }
    }
    let ctx = Context {
        base: base.to_path_buf(),
        groups,
        options: options.clone(),
        low_index: Mutex::new(HashMap::new()),
    };
    let run = || {
        // Shared searches first, so no check waits on one inside the pool.
        for entry in &manifest.checks {
            if let Some((group, index)) = entry.check.table() {
                ctx.classes(group, index);
            }
        }
        manifest
            .checks
            .par_iter()
            .enumerate()
            .map(|(i, e)| run_one(&ctx, i + 1, &e.check))
            .collect::<Vec<_>>()
    };
    let outcomes = if options.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .expect("thread pool")
            .install(run)
    } else {
        run()
    };
    log::debug!("verified {} checks from {}", outcomes.len(), ctx.base.display());
    Ok(VerificationReport { outcomes })
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn list(v: &[String]) -> String {
    format!("{{{}}}", v.join("; "))
}

fn run_one(ctx: &Context, ordinal: usize, check: &Check) -> CheckOutcome {
    let start = Instant::now();
    let (expected, actual) = evaluate(ctx, check);
    let status = match &actual {
        Err(_) => Status::Error,
        Ok(a) if *a == expected => Status::Pass,
        Ok(_) => Status::Fail,
    };
    CheckOutcome {
        ordinal,
        kind: check.kind(),
        subject: check.subject(),
        status,
        expected,
        actual: actual.unwrap_or_else(|e| format!("error: {e}")),
        elapsed: start.elapsed(),
    }
}

/// Expected and actual values rendered the same way, so a check passes
/// exactly when the strings agree.
fn evaluate(ctx: &Context, check: &Check) -> (String, Result<String, String>) {
    match check {
        Check::LowIndexCount {
            group,
            index,
            expected_classes,
        } => {
            let classes = ctx.classes(group, *index);
            let actual = classes.as_ref().as_ref().map(|l| l.len().to_string()).map_err(Clone::clone);
            (expected_classes.to_string(), actual)
        }
        Check::AqiOfClass {
            group,
            index,
            class_ordinal,
            expected_invariants,
        } => {
            let actual = ctx
                .class(group, *index, *class_ordinal)
                .map(|c| c.abelian_invariants(&ctx.group(group)).to_string());
            (expected_invariants.clone(), actual)
        }
        Check::AqiOfGroup {
            group,
            expected_invariants,
        } => (
            expected_invariants.clone(),
            Ok(abelian_invariants(&ctx.group(group)).to_string()),
        ),
        Check::NestedLowIndex {
            group,
            outer_index,
            outer_class_ordinal,
            inner_index,
            expected_classes,
            expected_invariants_multiset,
        } => {
            let expected = format!(
                "{} {}",
                expected_classes,
                list(&sorted(expected_invariants_multiset.clone()))
            );
            let actual = ctx.class(group, *outer_index, *outer_class_ordinal).and_then(|c| {
                if *inner_index > ctx.options.max_cosets {
                    return Err(format!("index {inner_index} exceeds max cosets {}", ctx.options.max_cosets));
                }
                let h = tietze_simplify(
                    &reidemeister_schreier(&ctx.group(group), &c.representative),
                    DEFAULT_TIETZE_EFFORT,
                );
                let inner = low_index_subgroups_with(&h, *inner_index, *inner_index, &ctx.options.low_index)
                    .map_err(|e| e.to_string())?;
                let aqis = inner.iter().map(|r| r.abelian_invariants(&h).to_string()).collect();
                Ok(format!("{} {}", inner.len(), list(&sorted(aqis))))
            });
            (expected, actual)
        }
        Check::CosetImageOrder {
            group,
            index,
            class_ordinal,
            expected_order,
        } => {
            let expected = expected_order
                .value()
                .map_or_else(|| format!("{expected_order:?}"), |v| v.to_string());
            let actual = ctx
                .class(group, *index, *class_ordinal)
                .map(|c| c.core_image().order().to_string());
            (expected, actual)
        }
        Check::SimpleCore {
            group,
            index,
            class_ordinal,
            expected_simple,
        } => {
            let actual = ctx.class(group, *index, *class_ordinal).and_then(|c| {
                c.core_image()
                    .is_simple(DEFAULT_ELEMENT_BUDGET)
                    .map(|s| s.to_string())
                    .map_err(|e| e.to_string())
            });
            (expected_simple.to_string(), actual)
        }
        Check::MappingTorusH1 {
            matrix,
            power,
            expected_invariants,
        } => {
            let actual = matrix
                .resolve()
                .and_then(|m| mapping_torus_h1(&m, *power).map_err(|e| e.to_string()))
                .map(|h| h.to_string());
            (expected_invariants.clone(), actual)
        }
        Check::CharPoly {
            matrix,
            expected_coeffs,
        } => {
            let actual = matrix
                .resolve()
                .and_then(|m| char_poly(&m).map_err(|e| e.to_string()))
                .map(|c| format!("{c:?}").replace(' ', ""));
            (format!("{expected_coeffs:?}").replace(' ', ""), actual)
        }
        Check::PrimeSplit {
            field,
            p,
            expected_pattern,
        } => {
            let actual = field
                .parse::<FieldSpec>()
                .map_err(|e| e.to_string())
                .and_then(|f| split_prime(&f, *p).map_err(|e| e.to_string()))
                .map(|s| format!("{:?}", s.pattern()));
            (format!("{expected_pattern:?}"), actual)
        }
        Check::EpiClasses {
            group,
            target,
            aut_order,
            expected_classes,
        } => {
            let actual = target
                .parse::<Target>()
                .map_err(|e| e.to_string())
                .and_then(|t| {
                    count_epimorphisms(&ctx.group(group), &t.group(), *aut_order).map_err(|e| e.to_string())
                })
                .map(|e| e.classes.to_string());
            (expected_classes.to_string(), actual)
        }
    }
}

/// The manifest shipped with the crate, mirroring the computational
/// supplement line by line.
pub const SUPPLEMENT_MANIFEST: &str = include_str!("../../data/paper_supplement.manifest");

#[cfg(test)]
mod tests {
    use super::*;

    fn run(json: &str) -> VerificationReport {
        run_checks(
            &VerificationManifest::from_json(json).unwrap(),
            Path::new("."),
            &VerifyOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn empty_manifest_passes() {
        let r = run(r#"{"checks": []}"#);
        assert!(r.outcomes.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn wrong_expectation_fails_with_actual() {
        let r = run(r#"{"checks": [
            {"kind": "LowIndexCount", "group": "Gamma", "index": 7, "expected_classes": 5},
            {"kind": "AqiOfGroup", "group": "Gamma", "expected_invariants": "[ 3 ]"}
        ]}"#);
        assert_eq!(r.outcomes[0].status, Status::Fail);
        assert_eq!(r.outcomes[0].actual, "4");
        assert_eq!(r.outcomes[1].status, Status::Pass);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn resource_errors_are_recorded() {
        let r = run(r#"{"checks": [
            {"kind": "SimpleCore", "group": "Gamma", "index": 3, "class_ordinal": 2, "expected_simple": false}
        ]}"#);
        assert_eq!(r.outcomes[0].status, Status::Error);
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn unresolved_references_abort() {
        let m = VerificationManifest::from_json(
            r#"{"checks": [{"kind": "AqiOfGroup", "group": "Nope", "expected_invariants": "[ ]"}]}"#,
        )
        .unwrap();
        let err = run_checks(&m, Path::new("."), &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, VerifyError::Unresolved { ordinal: 1, .. }));
        assert!(VerificationManifest::from_json("{").is_err());
    }

    #[test]
    fn shipped_manifest_parses() {
        let m = VerificationManifest::from_json(SUPPLEMENT_MANIFEST).unwrap();
        assert!(!m.checks.is_empty());
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(VerificationManifest::from_json(&back).unwrap(), m);
    }

    #[test]
    fn shared_searches_under_many_jobs() {
        let checks: Vec<String> = (1..=7)
            .flat_map(|k| {
                [
                    r#"{"kind": "LowIndexCount", "group": "Gamma", "index": 12, "expected_classes": 7}"#.to_string(),
                    format!(r#"{{"kind": "CosetImageOrder", "group": "Gamma", "index": 12, "class_ordinal": {k}, "expected_order": 0}}"#),
                ]
            })
            .collect();
        let json = format!(r#"{{"checks": [{}]}}"#, checks.join(","));
        let m = VerificationManifest::from_json(&json).unwrap();
        let opts = VerifyOptions {
            jobs: 4,
            ..VerifyOptions::default()
        };
        let r = run_checks(&m, Path::new("."), &opts).unwrap();
        assert_eq!(r.outcomes.len(), 14);
        assert!(r.outcomes.iter().step_by(2).all(|o| o.status == Status::Pass));
        assert!(r.outcomes.iter().skip(1).step_by(2).all(|o| o.status == Status::Fail));
    }

    #[test]
    fn value_kinds() {
        let r = run(r#"{"checks": [
            {"kind": "MappingTorusH1", "matrix": "A", "power": 6, "expected_invariants": "[ 5, 55, 0 ]"},
            {"kind": "MappingTorusH1", "matrix": [[-3,1],[-1,0]], "power": 1, "expected_invariants": "[ 5, 0 ]"},
            {"kind": "CharPoly", "matrix": "A", "expected_coeffs": [1, -3, 3, -3, 1]},
            {"kind": "PrimeSplit", "field": "Kweeks", "p": 23, "expected_pattern": [[1, 2], [1, 1]]},
            {"kind": "EpiClasses", "group": "Gamma", "target": "A4", "expected_classes": 1},
            {"kind": "CosetImageOrder", "group": "Gamma", "index": 3, "class_ordinal": 1, "expected_order": "3"}
        ]}"#);
        for o in &r.outcomes {
            assert_eq!(o.status, Status::Pass, "{o:?}");
        }
    }
}
