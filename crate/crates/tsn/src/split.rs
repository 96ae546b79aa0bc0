//! Resumable driver for [`SplitCensus`]. Finished branches are recorded in a
//! JSON checkpoint; a rerun with the same checkpoint only does the rest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tsn_core::placement::valid_placements;
use tsn_core::solver::{split_monomial, SplitCensus, SubsetReport, TableBank};
use tsn_core::{Lattice, Placement};

use crate::cache::TableStore;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BranchReport {
    pub subsets: u64,
    pub by_min_field: BTreeMap<u32, u64>,
    pub unresolved: u64,
    pub examples: BTreeMap<u32, Vec<usize>>,
    pub first_unresolved: Option<Vec<usize>>,
}

impl BranchReport {
    fn from_report(r: SubsetReport) -> Self {
        BranchReport {
            subsets: r.subsets,
            by_min_field: r.by_min_field,
            unresolved: r.unresolved,
            examples: r.examples,
            first_unresolved: r.first_unresolved,
        }
    }

    fn into_report(self, size: usize) -> SubsetReport {
        SubsetReport {
            size,
            subsets: self.subsets,
            by_min_field: self.by_min_field,
            unresolved: self.unresolved,
            examples: self.examples,
            first_unresolved: self.first_unresolved,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub n: usize,
    pub size: usize,
    pub orders: Vec<u32>,
    /// Labels of the placements with non-monomial minors, in bank order.
    pub core: Vec<String>,
    pub free: usize,
    pub branches_total: usize,
    pub completed: BTreeMap<usize, BranchReport>,
}

impl Checkpoint {
    pub fn fresh(setup: &SplitSetup, size: usize) -> Self {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            n: setup.n,
            size,
            orders: setup.bank.orders().to_vec(),
            core: setup
                .core
                .iter()
                .map(|&i| setup.placements[i].to_string())
                .collect(),
            free: setup.free.len(),
            branches_total: setup.core.len() + 1,
            completed: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading checkpoint {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing checkpoint {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> anyhow::Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// The checkpoint was written for the same census.
    pub fn matches(&self, other: &Checkpoint) -> bool {
        self.version == other.version
            && self.n == other.n
            && self.size == other.size
            && self.orders == other.orders
            && self.core == other.core
            && self.free == other.free
            && self.branches_total == other.branches_total
    }

    pub fn is_complete(&self) -> bool {
        self.completed.len() == self.branches_total
    }

    /// Merged report over the finished branches, in branch order.
    pub fn report(&self) -> SubsetReport {
        let mut report = SubsetReport {
            size: self.size,
            ..Default::default()
        };
        for b in self.completed.values() {
            report.merge(b.clone().into_report(self.size));
        }
        report
    }
}

/// Valid placements split by minor shape, with tables for the core ones.
pub struct SplitSetup {
    pub n: usize,
    pub placements: Vec<Placement>,
    pub core: Vec<usize>,
    pub free: Vec<usize>,
    pub bank: TableBank,
}

impl SplitSetup {
    pub fn new(lat: &Lattice, orders: &[u32], store: &TableStore) -> anyhow::Result<Self> {
        let placements = valid_placements(lat);
        let (core, free) = split_monomial(lat, &placements);
        let bank = store.bank(
            lat,
            core.iter().map(|&i| placements[i].clone()).collect(),
            orders,
        )?;
        Ok(SplitSetup {
            n: lat.length(),
            placements,
            core,
            free,
            bank,
        })
    }

    pub fn census(&self, size: usize) -> anyhow::Result<SplitCensus<'_>> {
        Ok(SplitCensus::new(
            &self.bank,
            self.core.clone(),
            self.free.clone(),
            size,
        )?)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub seconds: Option<u64>,
    /// Branches finished by this call at most.
    pub branches: Option<usize>,
}

/// Runs the unfinished branches of `checkpoint`, saving it to `path` after
/// every batch. Stops early when a limit is reached; the checkpoint then
/// holds the partial progress.
pub fn run(
    census: &SplitCensus<'_>,
    checkpoint: &mut Checkpoint,
    path: Option<&Path>,
    limits: Limits,
    mut progress: impl FnMut(usize, usize),
) -> anyhow::Result<()> {
    if checkpoint.branches_total != census.branch_count() || checkpoint.size != census.size() {
        bail!("checkpoint does not belong to this census");
    }
    let start = Instant::now();
    let pending: Vec<usize> = (0..census.branch_count())
        .filter(|b| !checkpoint.completed.contains_key(b))
        .collect();
    let allowed = limits.branches.unwrap_or(usize::MAX).min(pending.len());
    let batch = rayon::current_num_threads().max(1);
    for group in pending[..allowed].chunks(batch) {
        let done: Vec<(usize, SubsetReport)> =
            group.par_iter().map(|&b| (b, census.branch(b))).collect();
        for (b, r) in done {
            checkpoint.completed.insert(b, BranchReport::from_report(r));
        }
        if let Some(p) = path {
            checkpoint.save(p)?;
        }
        progress(checkpoint.completed.len(), checkpoint.branches_total);
        if limits
            .seconds
            .is_some_and(|s| start.elapsed().as_secs() >= s)
        {
            break;
        }
    }
    Ok(())
}
