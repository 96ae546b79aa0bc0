//! Receiver placements and their validity.
//!
//! A placement is valid when the sources reach its labels by vertex-disjoint
//! paths. In `TSN(n)` this happens exactly when no `k`-triangle holds more
//! than `k` labels, which is what [`Placement::is_valid`] checks. The flow
//! oracle in [`crate::flow`] answers the same question independently and
//! produces a witness path system.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::flow;
use crate::lattice::{Lattice, Triangle, VertexMask};
use crate::minors::PathSystem;
use crate::{binomial, Error, Result};

/// An `n`-subset of vertex indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Placement {
    n: usize,
    labels: Vec<usize>,
}

impl Placement {
    pub fn new(lat: &Lattice, labels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut labels: Vec<usize> = labels.into_iter().collect();
        let n = lat.length();
        if labels.len() != n {
            return Err(Error::PlacementSize {
                n,
                got: labels.len(),
            });
        }
        for &l in &labels {
            lat.check_index(l)?;
        }
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0]));
        }
        Ok(Placement { n, labels })
    }

    /// Parses a comma-separated index list such as `"1,4,5,10"`.
    pub fn parse(lat: &Lattice, s: &str) -> Result<Self> {
        let labels = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(alloc::format!("bad label {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lat, labels)
    }

    pub fn sources(lat: &Lattice) -> Self {
        Placement {
            n: lat.length(),
            labels: lat.sources(),
        }
    }

    pub fn left_side(lat: &Lattice) -> Self {
        Self::new(lat, lat.left_side()).expect("side is a placement")
    }

    pub fn right_side(lat: &Lattice) -> Self {
        Self::new(lat, lat.right_side()).expect("side is a placement")
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn mask(&self) -> VertexMask {
        self.labels.iter().fold(0, |m, &l| m | 1 << (l - 1))
    }

    pub fn contains(&self, index: usize) -> bool {
        self.labels.binary_search(&index).is_ok()
    }

    pub fn rotate(&self, lat: &Lattice) -> Placement {
        self.map(|i| lat.rotate_index(i))
    }

    pub fn reflect(&self, lat: &Lattice) -> Placement {
        self.map(|i| lat.reflect_index(i))
    }

    fn map(&self, f: impl Fn(usize) -> usize) -> Placement {
        let mut labels: Vec<usize> = self.labels.iter().map(|&i| f(i)).collect();
        labels.sort_unstable();
        Placement { n: self.n, labels }
    }

    /// The first triangle (by length, then corner index) holding more labels
    /// than its length.
    pub fn overcrowded_triangle(&self, lat: &Lattice) -> Option<Triangle> {
        debug_assert_eq!(lat.length(), self.n);
        let mask = self.mask();
        lat.triangles()
            .iter()
            .zip(lat.triangle_masks())
            .find(|(t, m)| (*m & mask).count_ones() as usize > t.k)
            .map(|(t, _)| *t)
    }

    pub fn is_distributed(&self, lat: &Lattice) -> bool {
        self.overcrowded_triangle(lat).is_none()
    }

    pub fn is_valid(&self, lat: &Lattice) -> bool {
        self.is_distributed(lat)
    }

    /// Witness from the flow oracle, or `None` when no disjoint system exists.
    pub fn disjoint_paths(&self, lat: &Lattice) -> Option<PathSystem> {
        let paths = flow::disjoint_paths(lat, &self.labels)?;
        Some(PathSystem::from_paths(lat, &self.labels, paths))
    }

    pub fn disjoint_paths_exist(&self, lat: &Lattice) -> bool {
        flow::disjoint_paths(lat, &self.labels).is_some()
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.labels {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn format_labels(labels: &[usize]) -> String {
    labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CensusRow {
    pub n: usize,
    pub valid: u64,
    pub invalid: u64,
    pub total: u64,
}

/// Pruned depth-first enumeration of valid placements in lexicographic index
/// order. A partial subset that already overcrowds a triangle is never
/// extended, so the work is proportional to the number of valid prefixes.
pub struct Census<'a> {
    lat: &'a Lattice,
    triangle_k: Vec<u8>,
    budget: Option<u64>,
}

struct Walk<'f> {
    counts: Vec<u8>,
    stack: Vec<usize>,
    nodes: u64,
    valid: u64,
    on_valid: &'f mut dyn FnMut(&[usize]),
}

impl<'a> Census<'a> {
    /// `budget` caps the number of search nodes; exceeding it is an error.
    pub fn new(lat: &'a Lattice, budget: Option<u64>) -> Self {
        let triangle_k = lat.triangles().iter().map(|t| t.k as u8).collect();
        Census {
            lat,
            triangle_k,
            budget,
        }
    }

    pub fn total(&self) -> u64 {
        binomial(self.lat.vertex_count() as u64, self.lat.length() as u64)
    }

    pub fn run(&self) -> Result<CensusRow> {
        self.run_with(&mut |_| {})
    }

    pub fn run_with(&self, on_valid: &mut dyn FnMut(&[usize])) -> Result<CensusRow> {
        let mut valid = 0;
        let mut nodes = 0;
        for first in self.first_labels() {
            let (v, k) = self.branch(
                first,
                self.budget.map(|b| b.saturating_sub(nodes)),
                on_valid,
            )?;
            valid += v;
            nodes += k;
        }
        Ok(self.row(valid))
    }

    pub fn row(&self, valid: u64) -> CensusRow {
        let total = self.total();
        CensusRow {
            n: self.lat.length(),
            valid,
            invalid: total - valid,
            total,
        }
    }

    /// Smallest labels a placement can start with; each is an independent
    /// branch of the search.
    pub fn first_labels(&self) -> core::ops::RangeInclusive<usize> {
        1..=self.lat.vertex_count() - self.lat.length() + 1
    }

    /// Counts the valid placements whose smallest label is `first`.
    /// Returns `(valid, nodes visited)`.
    pub fn branch(
        &self,
        first: usize,
        budget: Option<u64>,
        on_valid: &mut dyn FnMut(&[usize]),
    ) -> Result<(u64, u64)> {
        let mut walk = Walk {
            counts: alloc::vec![0; self.triangle_k.len()],
            stack: Vec::with_capacity(self.lat.length()),
            nodes: 0,
            valid: 0,
            on_valid,
        };
        if self.push(&mut walk, first) {
            self.extend(&mut walk, first + 1, budget)?;
        }
        Ok((walk.valid, walk.nodes))
    }

    fn push(&self, walk: &mut Walk<'_>, v: usize) -> bool {
        let ids = self.lat.triangles_containing(v);
        for (pos, &id) in ids.iter().enumerate() {
            let c = &mut walk.counts[id as usize];
            *c += 1;
            if *c > self.triangle_k[id as usize] {
                for &undo in &ids[..=pos] {
                    walk.counts[undo as usize] -= 1;
                }
                return false;
            }
        }
        walk.stack.push(v);
        true
    }

    fn pop(&self, walk: &mut Walk<'_>) {
        let v = walk.stack.pop().expect("non-empty stack");
        for &id in self.lat.triangles_containing(v) {
            walk.counts[id as usize] -= 1;
        }
    }

    fn extend(&self, walk: &mut Walk<'_>, next: usize, budget: Option<u64>) -> Result<()> {
        walk.nodes += 1;
        if let Some(limit) = budget {
            if walk.nodes > limit {
                return Err(Error::Budget {
                    what: "placement census",
                    required: u128::from(walk.nodes),
                    limit: u128::from(limit),
                });
            }
        }
        let n = self.lat.length();
        if walk.stack.len() == n {
            walk.valid += 1;
            (walk.on_valid)(&walk.stack);
            return Ok(());
        }
        let need = n - walk.stack.len();
        let last = self.lat.vertex_count() + 1 - need;
        for v in next..=last {
            if self.push(walk, v) {
                self.extend(walk, v + 1, budget)?;
                self.pop(walk);
            }
        }
        Ok(())
    }
}

/// Census of valid placements of `TSN(n)`.
pub fn census(lat: &Lattice, budget: Option<u64>) -> Result<CensusRow> {
    Census::new(lat, budget).run()
}

/// Every valid placement, in lexicographic order.
pub fn valid_placements(lat: &Lattice) -> Vec<Placement> {
    let mut out = Vec::new();
    Census::new(lat, None)
        .run_with(&mut |labels| {
            out.push(Placement {
                n: lat.length(),
                labels: labels.to_vec(),
            })
        })
        .expect("no budget");
    out
}
