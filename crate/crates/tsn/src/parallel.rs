//! Rayon drivers over the pure routines of `tsn-core`. Work is split into
//! independent ranges and the results are folded in range order, so every
//! output is the same for any thread count.

use std::io::Write;

use rayon::prelude::*;
use tsn_core::placement::Census;
use tsn_core::solver::{
    self, Checker, CompiledMinor, EvalTable, MinFieldReport, ReceiverSet, SolveOptions,
    SolveResult, SubsetCensus, SubsetReport, TableBank,
};
use tsn_core::{CensusRow, Error, Field, Lattice, PointSpace};

/// Words of an evaluation table built per task.
const TABLE_CHUNK_WORDS: usize = 1 << 12;
/// Points scanned per task.
const SCAN_CHUNK: u64 = 1 << 16;

/// A census branch's `(valid, nodes)` with its streamed text.
type StreamedBranch = Result<((u64, u64), Vec<u8>), Error>;

/// Valid-placement census, one task per smallest label. `budget` caps the
/// total number of search nodes.
pub fn census(lat: &Lattice, budget: Option<u64>) -> Result<CensusRow, Error> {
    let c = Census::new(lat, budget);
    let firsts: Vec<usize> = c.first_labels().collect();
    let parts: Vec<Result<(u64, u64), Error>> = firsts
        .par_iter()
        .map(|&f| c.branch(f, budget, &mut |_| {}))
        .collect();
    total_with_budget(&c, parts, budget)
}

fn total_with_budget(
    c: &Census<'_>,
    parts: Vec<Result<(u64, u64), Error>>,
    budget: Option<u64>,
) -> Result<CensusRow, Error> {
    let mut valid = 0;
    let mut nodes: u64 = 0;
    for p in parts {
        let (v, k) = p?;
        valid += v;
        nodes += k;
    }
    if let Some(limit) = budget {
        if nodes > limit {
            return Err(Error::Budget {
                what: "placement census",
                required: u128::from(nodes),
                limit: u128::from(limit),
            });
        }
    }
    Ok(c.row(valid))
}

/// Census that also writes every valid placement, one comma-separated line
/// each, in lexicographic order. Branches run in parallel in batches and are
/// written in order.
pub fn census_stream(
    lat: &Lattice,
    budget: Option<u64>,
    out: &mut dyn Write,
) -> anyhow::Result<CensusRow> {
    let c = Census::new(lat, budget);
    let firsts: Vec<usize> = c.first_labels().collect();
    let batch = rayon::current_num_threads().max(1) * 2;
    let mut parts = Vec::with_capacity(firsts.len());
    for group in firsts.chunks(batch) {
        let done: Vec<StreamedBranch> = group
            .par_iter()
            .map(|&f| {
                let mut text = Vec::new();
                let r = c.branch(f, budget, &mut |labels| {
                    let line: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                    text.extend_from_slice(line.join(",").as_bytes());
                    text.push(b'\n');
                })?;
                Ok((r, text))
            })
            .collect();
        for d in done {
            let (r, text) = d?;
            out.write_all(&text)?;
            parts.push(Ok(r));
        }
    }
    Ok(total_with_budget(&c, parts, budget)?)
}

/// Evaluation table built over word ranges in parallel.
pub fn build_table(field: &Field, minor: &CompiledMinor, space: PointSpace) -> EvalTable {
    let words = EvalTable::word_count(space);
    let ranges: Vec<std::ops::Range<usize>> = (0..words)
        .step_by(TABLE_CHUNK_WORDS)
        .map(|s| s..(s + TABLE_CHUNK_WORDS).min(words))
        .collect();
    let parts: Vec<Vec<u64>> = ranges
        .into_par_iter()
        .map(|r| EvalTable::build_words(field, minor, space, r))
        .collect();
    EvalTable::from_words(space, parts.concat()).expect("table words built for this space")
}

/// Scans `0..len` in parallel batches of chunks and returns the smallest
/// accepted index. The examined count is reported as a sequential scan
/// would report it.
pub fn scan(checker: &Checker, len: u64) -> (Option<u64>, u64) {
    let batch = rayon::current_num_threads().max(1) as u64 * 4;
    let mut start = 0;
    while start < len {
        let end = (start + batch * SCAN_CHUNK).min(len);
        let chunks: Vec<u64> = (start..end).step_by(SCAN_CHUNK as usize).collect();
        let found = chunks
            .par_iter()
            .filter_map(|&s| checker.scan(s..(s + SCAN_CHUNK).min(end)).0)
            .min();
        if let Some(i) = found {
            return (Some(i), i + 1);
        }
        start = end;
    }
    (None, len)
}

pub fn is_solvable(
    lat: &Lattice,
    rs: &ReceiverSet,
    field: &Field,
    opts: &SolveOptions,
) -> Result<SolveResult, Error> {
    let checker = Checker::new(lat, rs, field);
    solver::solve_with(&checker, opts, scan)
}

pub fn min_field(
    lat: &Lattice,
    rs: &ReceiverSet,
    opts: &SolveOptions,
) -> Result<MinFieldReport, Error> {
    solver::min_field_with(rs, |q| is_solvable(lat, rs, &Field::new(q)?, opts))
}

/// Census of all `size`-subsets of the bank, one task per smallest member.
pub fn subset_census(bank: &TableBank, size: usize) -> SubsetReport {
    let census = SubsetCensus::new(bank, size);
    let firsts: Vec<usize> = census.first_indices().collect();
    let parts: Vec<SubsetReport> = firsts.par_iter().map(|&f| census.branch(f)).collect();
    let mut report = SubsetReport {
        size,
        ..Default::default()
    };
    for p in parts {
        report.merge(p);
    }
    report
}
