//! Censuses over sets of receivers, driven by precomputed evaluation tables.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use itertools::Itertools;

use super::{any_common, CompiledMinor, EvalTable};
use crate::gf::{Field, PointSpace};
use crate::lattice::Lattice;
use crate::minors::{minor, MinorPolynomial};
use crate::placement::Placement;
use crate::{Error, Result};

/// Evaluation tables of a fixed list of placements over nonzero points, for
/// a few field orders. `tables[i][j]` belongs to `orders[i]` and placement
/// `j`.
#[derive(Debug, Clone)]
pub struct TableBank {
    n: usize,
    placements: Vec<Placement>,
    minors: Vec<MinorPolynomial>,
    orders: Vec<u32>,
    tables: Vec<Vec<EvalTable>>,
}

impl TableBank {
    /// Builds every table sequentially.
    pub fn build(lat: &Lattice, placements: Vec<Placement>, orders: &[u32]) -> Result<Self> {
        Self::build_with(lat, placements, orders, |field, _, minor, space| {
            Ok(EvalTable::build(field, minor, space))
        })
    }

    /// `make` builds one table; the std crate passes a parallel or cached
    /// builder.
    pub fn build_with<E: From<Error>>(
        lat: &Lattice,
        placements: Vec<Placement>,
        orders: &[u32],
        mut make: impl FnMut(
            &Field,
            &Placement,
            &CompiledMinor,
            PointSpace,
        ) -> core::result::Result<EvalTable, E>,
    ) -> core::result::Result<Self, E> {
        let minors: Vec<MinorPolynomial> = placements.iter().map(|p| minor(lat, p)).collect();
        let mut tables = Vec::with_capacity(orders.len());
        for &q in orders {
            let field = Field::new(q)?;
            let space = PointSpace::new(q, lat.num_vars(), true);
            let mut row = Vec::with_capacity(placements.len());
            for (p, m) in placements.iter().zip(&minors) {
                let table = make(&field, p, &CompiledMinor::new(m, &field), space)?;
                if table.space() != space {
                    return Err(Error::Parse(alloc::format!(
                        "table for {p} over F_{q} has the wrong space"
                    ))
                    .into());
                }
                row.push(table);
            }
            tables.push(row);
        }
        Ok(TableBank {
            n: lat.length(),
            placements,
            minors,
            orders: orders.to_vec(),
            tables,
        })
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn minors(&self) -> &[MinorPolynomial] {
        &self.minors
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn table(&self, order_idx: usize, placement: usize) -> &EvalTable {
        &self.tables[order_idx][placement]
    }

    /// Smallest order in the bank over which the placements `ids` (plus the
    /// sides) have a common solution.
    pub fn min_field(&self, ids: &[usize]) -> Option<u32> {
        let mut refs: Vec<&EvalTable> = Vec::with_capacity(ids.len());
        for (oi, &q) in self.orders.iter().enumerate() {
            refs.clear();
            refs.extend(ids.iter().map(|&j| &self.tables[oi][j]));
            if any_common(&refs) {
                return Some(q);
            }
        }
        None
    }

    pub fn order_index(&self, q: u32) -> Result<usize> {
        self.orders
            .iter()
            .position(|&o| o == q)
            .ok_or(Error::UnsupportedField(q))
    }
}

/// Distribution of the minimum field order over all `size`-subsets of the
/// bank's placements (sides always included).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubsetReport {
    pub size: usize,
    pub subsets: u64,
    pub by_min_field: BTreeMap<u32, u64>,
    /// Subsets not solvable over any order in the bank.
    pub unresolved: u64,
    /// Lexicographically first subset for each minimum order.
    pub examples: BTreeMap<u32, Vec<usize>>,
    pub first_unresolved: Option<Vec<usize>>,
}

impl SubsetReport {
    pub fn count(&self, q: u32) -> u64 {
        self.by_min_field.get(&q).copied().unwrap_or(0)
    }

    pub fn max_min_field(&self) -> Option<u32> {
        self.by_min_field.keys().next_back().copied()
    }

    /// Folds in the report of a later branch.
    pub fn merge(&mut self, other: SubsetReport) {
        self.subsets += other.subsets;
        self.unresolved += other.unresolved;
        for (q, c) in other.by_min_field {
            *self.by_min_field.entry(q).or_insert(0) += c;
        }
        for (q, ex) in other.examples {
            self.examples.entry(q).or_insert(ex);
        }
        if self.first_unresolved.is_none() {
            self.first_unresolved = other.first_unresolved;
        }
    }
}

pub struct SubsetCensus<'a> {
    bank: &'a TableBank,
    size: usize,
}

impl<'a> SubsetCensus<'a> {
    pub fn new(bank: &'a TableBank, size: usize) -> Self {
        SubsetCensus { bank, size }
    }

    pub fn run(&self) -> SubsetReport {
        let mut report = SubsetReport {
            size: self.size,
            ..Default::default()
        };
        for first in self.first_indices() {
            report.merge(self.branch(first));
        }
        report
    }

    pub fn first_indices(&self) -> core::ops::Range<usize> {
        let m = self.bank.placements.len();
        0..(m + 1).saturating_sub(self.size)
    }

    /// Subsets whose smallest member is `first`.
    pub fn branch(&self, first: usize) -> SubsetReport {
        let m = self.bank.placements.len();
        let mut report = SubsetReport {
            size: self.size,
            ..Default::default()
        };
        let mut ids = Vec::with_capacity(self.size);
        for rest in (first + 1..m).combinations(self.size - 1) {
            ids.clear();
            ids.push(first);
            ids.extend(rest);
            report.subsets += 1;
            match self.bank.min_field(&ids) {
                Some(q) => {
                    *report.by_min_field.entry(q).or_insert(0) += 1;
                    report.examples.entry(q).or_insert_with(|| ids.clone());
                }
                None => {
                    report.unresolved += 1;
                    if report.first_unresolved.is_none() {
                        report.first_unresolved = Some(ids.clone());
                    }
                }
            }
        }
        report
    }
}

/// Splits placements into those whose minor can vanish on nonzero points
/// and those with a monomial minor, which never does. Returns indices into
/// `placements`.
pub fn split_monomial(lat: &Lattice, placements: &[Placement]) -> (Vec<usize>, Vec<usize>) {
    (0..placements.len()).partition(|&i| !minor(lat, &placements[i]).is_monomial())
}

/// Census of `size`-subsets of a placement list in which placements with
/// monomial minors are counted combinatorially. Such a placement never
/// changes the minimum field of a set, so a subset with core part `T` of
/// size `s` has the minimum field of `T`, and there are `C(free, size - s)`
/// subsets sharing that core part.
///
/// `bank` holds the core placements only; `core` and `free` map back to
/// indices of the full list. Branch `b < core.len()` covers the subsets
/// whose smallest core member is `b`; branch `core.len()` covers the
/// subsets without one, whose minimum is the smallest order in the bank
/// (the all-ones point solves the sides alone).
pub struct SplitCensus<'a> {
    bank: &'a TableBank,
    core: Vec<usize>,
    free: Vec<usize>,
    size: usize,
}

impl<'a> SplitCensus<'a> {
    pub fn new(
        bank: &'a TableBank,
        core: Vec<usize>,
        free: Vec<usize>,
        size: usize,
    ) -> Result<Self> {
        if core.len() != bank.placements.len() {
            return Err(Error::Parse(alloc::format!(
                "bank has {} placements, core list has {}",
                bank.placements.len(),
                core.len()
            )));
        }
        Ok(SplitCensus {
            bank,
            core,
            free,
            size,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn branch_count(&self) -> usize {
        self.core.len() + 1
    }

    pub fn total_subsets(&self) -> u64 {
        crate::binomial((self.core.len() + self.free.len()) as u64, self.size as u64)
    }

    pub fn run(&self) -> SubsetReport {
        let mut report = SubsetReport {
            size: self.size,
            ..Default::default()
        };
        for b in 0..self.branch_count() {
            report.merge(self.branch(b));
        }
        report
    }

    pub fn branch(&self, b: usize) -> SubsetReport {
        let mut report = SubsetReport {
            size: self.size,
            ..Default::default()
        };
        if b == self.core.len() {
            self.record(&mut report, &[]);
            return report;
        }
        let mut ids = Vec::with_capacity(self.size);
        for s in 1..=self.size.min(self.core.len() - b) {
            for rest in (b + 1..self.core.len()).combinations(s - 1) {
                ids.clear();
                ids.push(b);
                ids.extend(rest);
                self.record(&mut report, &ids);
            }
        }
        report
    }

    fn record(&self, report: &mut SubsetReport, ids: &[usize]) {
        let fill = self.size - ids.len();
        let weight = crate::binomial(self.free.len() as u64, fill as u64);
        if weight == 0 {
            return;
        }
        report.subsets += weight;
        let example = || {
            let mut ex: Vec<usize> = ids
                .iter()
                .map(|&i| self.core[i])
                .chain(self.free[..fill].iter().copied())
                .collect();
            ex.sort_unstable();
            ex
        };
        let q = if ids.is_empty() {
            self.bank.orders.first().copied()
        } else {
            self.bank.min_field(ids)
        };
        match q {
            Some(q) => {
                *report.by_min_field.entry(q).or_insert(0) += weight;
                report.examples.entry(q).or_insert_with(&example);
            }
            None => {
                report.unresolved += weight;
                if report.first_unresolved.is_none() {
                    report.first_unresolved = Some(example());
                }
            }
        }
    }
}
