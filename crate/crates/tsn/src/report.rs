//! Machine-readable run outputs. Every output carries the resolved
//! [`RunConfig`] it was produced with.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use tsn_core::solver::{MinFieldReport, Mode, Outcome, SolveResult, SubsetReport};
use tsn_core::{CensusRow, Placement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Randomized,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub n: usize,
    pub placements: Vec<String>,
    pub q: Option<u32>,
    pub include_sides: bool,
    pub mode: SearchMode,
    pub budget_points: u128,
    pub budget_seconds: Option<u64>,
    pub trials: u64,
    pub seed: u64,
    pub format: Format,
    pub jobs: usize,
    pub cache_dir: Option<String>,
}

/// One run: its configuration, its result and the wall time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub config: RunConfig,
    pub result: T,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub n: usize,
    pub valid: u64,
    pub invalid: u64,
    pub total: u64,
}

impl From<CensusRow> for CensusResult {
    fn from(r: CensusRow) -> Self {
        CensusResult {
            n: r.n,
            valid: r.valid,
            invalid: r.invalid,
            total: r.total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorResult {
    pub placement: String,
    pub valid: bool,
    pub polynomial: String,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleResult {
    pub corner: (usize, usize),
    pub k: usize,
    pub vertices: Vec<usize>,
    pub labels_inside: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityResult {
    pub placement: String,
    pub valid: bool,
    pub overcrowded: Option<TriangleResult>,
    /// Vertex-disjoint paths, one per source, when they exist.
    pub paths: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryResult {
    pub placement: String,
    pub rotation: String,
    pub rotation_squared: String,
    pub reflection: String,
    /// Distinct images under the six symmetries, sorted.
    pub orbit: Vec<String>,
    pub orbit_size: usize,
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveOutcome {
    Solvable,
    Unsolvable,
    Unknown,
}

impl From<Outcome> for SolveOutcome {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Solvable => SolveOutcome::Solvable,
            Outcome::Unsolvable => SolveOutcome::Unsolvable,
            Outcome::Unknown => SolveOutcome::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub receivers: Vec<String>,
    pub q: u32,
    pub solvable: Option<bool>,
    pub outcome: SolveOutcome,
    pub witness: Option<Vec<u8>>,
    /// The witness was re-evaluated against every minor.
    pub verified: Option<bool>,
    pub mode: String,
    pub seed: Option<u64>,
    pub points_examined: u64,
    pub space_size: u128,
}

impl SolveOutput {
    pub fn new(
        receivers: &[Placement],
        include_sides: bool,
        r: &SolveResult,
        verified: Option<bool>,
    ) -> Self {
        SolveOutput {
            receivers: receiver_names(receivers, include_sides),
            q: r.q,
            solvable: match r.outcome {
                Outcome::Solvable => Some(true),
                Outcome::Unsolvable => Some(false),
                Outcome::Unknown => None,
            },
            outcome: r.outcome.into(),
            witness: r.witness.clone(),
            verified,
            mode: match r.mode {
                Mode::Exhaustive => "exhaustive",
                Mode::Randomized => "randomized",
            }
            .to_string(),
            seed: r.seed,
            points_examined: r.points_examined,
            space_size: r.space_size,
        }
    }
}

pub fn receiver_names(receivers: &[Placement], include_sides: bool) -> Vec<String> {
    let mut out = Vec::with_capacity(receivers.len() + 2);
    if include_sides {
        out.push("left-side".to_string());
        out.push("right-side".to_string());
    }
    out.extend(receivers.iter().map(|p| p.to_string()));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinFieldOutput {
    pub receivers: Vec<String>,
    /// Exact minimum, when every smaller order was ruled out.
    pub q: Option<u32>,
    pub lower_bound: u32,
    pub search_limit: u32,
    pub witness: Option<Vec<u8>>,
    pub witness_q: Option<u32>,
    pub verified: Option<bool>,
    pub stopped_by_budget: bool,
    pub attempts: Vec<SolveOutput>,
}

impl MinFieldOutput {
    pub fn new(
        receivers: &[Placement],
        include_sides: bool,
        r: &MinFieldReport,
        verified: Option<bool>,
    ) -> Self {
        MinFieldOutput {
            receivers: receiver_names(receivers, include_sides),
            q: r.exact,
            lower_bound: r.lower_bound,
            search_limit: r.search_limit,
            witness: r.witness.as_ref().map(|(_, w)| w.clone()),
            witness_q: r.witness.as_ref().map(|(q, _)| *q),
            verified,
            stopped_by_budget: r.stopped_by_budget,
            attempts: r
                .attempts
                .iter()
                .map(|a| SolveOutput::new(receivers, include_sides, a, None))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub receivers: Vec<String>,
    pub q: u32,
    pub point: Vec<u8>,
    pub valid: bool,
    /// Value of each receiver minor at the point.
    pub values: Vec<u8>,
}

/// Serializable form of a subset census report. Placements are written by
/// their labels.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SubsetCensusOutput {
    pub n: usize,
    pub size: usize,
    pub subsets: u64,
    pub by_min_field: BTreeMap<u32, u64>,
    pub max_min_field: Option<u32>,
    pub unresolved: u64,
    pub examples: BTreeMap<u32, Vec<String>>,
    pub first_unresolved: Option<Vec<String>>,
    /// Field orders the tables covered.
    pub orders: Vec<u32>,
    pub complete: bool,
    pub branches_done: usize,
    pub branches_total: usize,
}

impl SubsetCensusOutput {
    pub fn new(n: usize, placements: &[Placement], orders: &[u32], r: &SubsetReport) -> Self {
        let names = |ids: &Vec<usize>| {
            ids.iter()
                .map(|&i| placements[i].to_string())
                .collect::<Vec<_>>()
        };
        SubsetCensusOutput {
            n,
            size: r.size,
            subsets: r.subsets,
            by_min_field: r.by_min_field.clone(),
            max_min_field: r.max_min_field(),
            unresolved: r.unresolved,
            examples: r.examples.iter().map(|(q, ids)| (*q, names(ids))).collect(),
            first_unresolved: r.first_unresolved.as_ref().map(names),
            orders: orders.to_vec(),
            complete: true,
            branches_done: 0,
            branches_total: 0,
        }
    }

    pub fn count(&self, q: u32) -> u64 {
        self.by_min_field.get(&q).copied().unwrap_or(0)
    }
}

/// Rendering of a result as text lines or CSV rows.
pub trait Render {
    fn text(&self) -> String;
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>);
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn point(p: &Option<Vec<u8>>) -> String {
    p.as_ref()
        .map(|w| {
            w.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .unwrap_or_default()
}

impl Render for CensusResult {
    fn text(&self) -> String {
        format!(
            "n={} valid={} invalid={} total={}\n",
            self.n, self.valid, self.invalid, self.total
        )
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        (
            vec!["n", "valid", "invalid", "total"],
            vec![vec![
                self.n.to_string(),
                self.valid.to_string(),
                self.invalid.to_string(),
                self.total.to_string(),
            ]],
        )
    }
}

impl Render for MinorResult {
    fn text(&self) -> String {
        format!("{}\n", self.polynomial)
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        (
            vec!["placement", "valid", "terms", "polynomial"],
            vec![vec![
                self.placement.clone(),
                self.valid.to_string(),
                self.terms.to_string(),
                self.polynomial.clone(),
            ]],
        )
    }
}

impl Render for ValidityResult {
    fn text(&self) -> String {
        let mut s = format!(
            "placement {}: {}\n",
            self.placement,
            if self.valid { "valid" } else { "invalid" }
        );
        if let Some(t) = &self.overcrowded {
            let _ = writeln!(
                s,
                "overcrowded {}-triangle at ({},{}) holds {} labels",
                t.k, t.corner.0, t.corner.1, t.labels_inside
            );
        }
        for (i, p) in self.paths.iter().flatten().enumerate() {
            let _ = writeln!(
                s,
                "path {}: {}",
                i + 1,
                p.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" -> ")
            );
        }
        s
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let tri = self
            .overcrowded
            .as_ref()
            .map(|t| format!("{}@({},{})", t.k, t.corner.0, t.corner.1))
            .unwrap_or_default();
        (
            vec!["placement", "valid", "overcrowded"],
            vec![vec![self.placement.clone(), self.valid.to_string(), tri]],
        )
    }
}

impl Render for SymmetryResult {
    fn text(&self) -> String {
        format!(
            "placement {}\nrotation {}\nrotation^2 {}\nreflection {}\norbit ({}): {}\n",
            self.placement,
            self.rotation,
            self.rotation_squared,
            self.reflection,
            self.orbit_size,
            self.orbit.join(" | ")
        )
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        (
            vec![
                "placement",
                "rotation",
                "rotation_squared",
                "reflection",
                "orbit_size",
            ],
            vec![vec![
                self.placement.clone(),
                self.rotation.clone(),
                self.rotation_squared.clone(),
                self.reflection.clone(),
                self.orbit_size.to_string(),
            ]],
        )
    }
}

impl Render for SolveOutput {
    fn text(&self) -> String {
        let mut s = format!(
            "q={} {:?} ({} mode, {} of {} points)\n",
            self.q, self.outcome, self.mode, self.points_examined, self.space_size
        )
        .to_lowercase();
        if self.witness.is_some() {
            let _ = writeln!(s, "witness {}", point(&self.witness));
        }
        s
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        (
            vec![
                "q",
                "outcome",
                "mode",
                "seed",
                "points_examined",
                "space_size",
                "witness",
            ],
            vec![self.row()],
        )
    }
}

impl SolveOutput {
    fn row(&self) -> Vec<String> {
        vec![
            self.q.to_string(),
            format!("{:?}", self.outcome).to_lowercase(),
            self.mode.clone(),
            opt(&self.seed),
            self.points_examined.to_string(),
            self.space_size.to_string(),
            point(&self.witness),
        ]
    }
}

impl Render for MinFieldOutput {
    fn text(&self) -> String {
        let mut s = match self.q {
            Some(q) => format!("minimum field F_{q}\n"),
            None => format!(
                "minimum field not determined; at least {}\n",
                self.lower_bound
            ),
        };
        if let (Some(q), Some(_)) = (self.witness_q, &self.witness) {
            let _ = writeln!(s, "witness over F_{q}: {}", point(&self.witness));
        }
        for a in &self.attempts {
            let _ = writeln!(s, "  {}", a.text().lines().next().unwrap_or_default());
        }
        s
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        (
            vec![
                "q",
                "outcome",
                "mode",
                "seed",
                "points_examined",
                "space_size",
                "witness",
            ],
            self.attempts.iter().map(SolveOutput::row).collect(),
        )
    }
}

impl Render for VerifyOutput {
    fn text(&self) -> String {
        format!(
            "{} over F_{}\n",
            if self.valid {
                "valid witness"
            } else {
                "not a witness"
            },
            self.q
        )
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        (
            vec!["q", "point", "valid"],
            vec![vec![
                self.q.to_string(),
                point(&Some(self.point.clone())),
                self.valid.to_string(),
            ]],
        )
    }
}

impl Render for SubsetCensusOutput {
    fn text(&self) -> String {
        let mut s = format!(
            "n={} size={} subsets={}{}\n",
            self.n,
            self.size,
            self.subsets,
            if self.complete { "" } else { " (partial)" }
        );
        for (q, c) in &self.by_min_field {
            let _ = writeln!(s, "min field {q}: {c}");
        }
        if self.unresolved > 0 {
            let _ = writeln!(s, "unresolved over {:?}: {}", self.orders, self.unresolved);
        }
        s
    }

    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let mut rows: Vec<Vec<String>> = self
            .by_min_field
            .iter()
            .map(|(q, c)| vec![self.size.to_string(), q.to_string(), c.to_string()])
            .collect();
        if self.unresolved > 0 {
            rows.push(vec![
                self.size.to_string(),
                "unresolved".into(),
                self.unresolved.to_string(),
            ]);
        }
        (vec!["size", "min_field", "count"], rows)
    }
}

/// The output of a run in the requested format.
pub fn render<T: Serialize + Render>(report: &Report<T>, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Text => Ok(config_comment(&report.config)? + &report.result.text()),
        Format::Csv => {
            let (header, rows) = report.result.csv();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header)?;
            for r in rows {
                w.write_record(&r)?;
            }
            Ok(config_comment(&report.config)? + &String::from_utf8(w.into_inner()?)?)
        }
    }
}

fn config_comment(config: &RunConfig) -> anyhow::Result<String> {
    Ok(format!("# {}\n", serde_json::to_string(config)?))
}
