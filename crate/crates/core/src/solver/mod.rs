//! Solvability of receiver sets over small fields.
//!
//! A set of receivers is solvable over `F_q` when one assignment of the edge
//! variables makes every receiver's minor nonzero at once. With the two side
//! receivers present (the default) every variable must be nonzero, so the
//! search runs over `(F_q^*)^k` only.

mod census;
mod table;

pub use census::{split_monomial, SplitCensus, SubsetCensus, SubsetReport, TableBank};
pub use table::{any_common, first_common, EvalTable};

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::{Field, PointSpace};
use crate::lattice::Lattice;
use crate::minors::{minor, MinorPolynomial};
use crate::placement::Placement;
use crate::poly::Poly;
use crate::{Error, Result};

/// Receivers of one lattice, optionally together with the two sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiverSet {
    n: usize,
    placements: Vec<Placement>,
    include_sides: bool,
}

impl ReceiverSet {
    /// Every placement must be valid.
    pub fn new(lat: &Lattice, placements: Vec<Placement>, include_sides: bool) -> Result<Self> {
        for p in &placements {
            if p.length() != lat.length() {
                return Err(Error::MixedLengths(lat.length(), p.length()));
            }
            if !p.is_valid(lat) {
                return Err(Error::InvalidPlacement(alloc::format!("{p}")));
            }
        }
        Ok(ReceiverSet {
            n: lat.length(),
            placements,
            include_sides,
        })
    }

    pub fn with_sides(lat: &Lattice, placements: Vec<Placement>) -> Result<Self> {
        Self::new(lat, placements, true)
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn include_sides(&self) -> bool {
        self.include_sides
    }

    /// Number of receivers, sides included.
    pub fn receiver_count(&self) -> usize {
        self.placements.len() + if self.include_sides { 2 } else { 0 }
    }

    /// Every receiver placement, sides first when included.
    pub fn all_placements(&self, lat: &Lattice) -> Vec<Placement> {
        let mut all = Vec::with_capacity(self.receiver_count());
        if self.include_sides {
            all.push(Placement::left_side(lat));
            all.push(Placement::right_side(lat));
        }
        all.extend(self.placements.iter().cloned());
        all
    }

    pub fn minors(&self, lat: &Lattice) -> Vec<MinorPolynomial> {
        self.all_placements(lat)
            .iter()
            .map(|p| minor(lat, p))
            .collect()
    }

    /// Space searched: nonzero points when the sides are present.
    pub fn space(&self, lat: &Lattice, q: u32) -> PointSpace {
        PointSpace::new(q, lat.num_vars(), self.include_sides)
    }

    pub fn rotate(&self, lat: &Lattice) -> Self {
        ReceiverSet {
            placements: self.placements.iter().map(|p| p.rotate(lat)).collect(),
            ..self.clone()
        }
    }

    pub fn reflect(&self, lat: &Lattice) -> Self {
        ReceiverSet {
            placements: self.placements.iter().map(|p| p.reflect(lat)).collect(),
            ..self.clone()
        }
    }
}

/// A minor flattened for evaluation: coefficient images in the field and
/// variable positions per term.
#[derive(Debug, Clone)]
pub struct CompiledMinor {
    terms: Vec<(u8, Vec<u8>)>,
}

impl CompiledMinor {
    pub fn new(poly: &MinorPolynomial, field: &Field) -> Self {
        let terms = poly
            .terms()
            .iter()
            .map(|t| {
                (
                    field.from_int(t.coeff),
                    t.vars.bits().map(|b| b as u8).collect(),
                )
            })
            .filter(|(c, _)| *c != 0)
            .collect();
        CompiledMinor { terms }
    }

    #[inline]
    pub fn eval(&self, field: &Field, point: &[u8]) -> u8 {
        let mut acc = 0;
        for (c, vars) in &self.terms {
            let mut v = *c;
            for &b in vars {
                v = field.mul(v, point[b as usize]);
            }
            acc = field.add(acc, v);
        }
        acc
    }

    /// A single term with a unit coefficient never vanishes on nonzero points.
    pub fn never_zero_on_nonzero_points(&self) -> bool {
        self.terms.len() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Solvable,
    Unsolvable,
    /// Random sampling found nothing; no conclusion.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Randomized,
    /// Exhaustive when the space fits the budget, randomized otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Largest space scanned exhaustively.
    pub budget_points: u128,
    pub trials: u64,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::Auto,
            budget_points: 1 << 26,
            trials: 1 << 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub q: u32,
    pub outcome: Outcome,
    pub witness: Option<Vec<u8>>,
    pub mode: Mode,
    /// Points evaluated (exhaustive) or sampled (randomized).
    pub points_examined: u64,
    pub space_size: u128,
    pub seed: Option<u64>,
}

impl SolveResult {
    pub fn is_solvable(&self) -> bool {
        self.outcome == Outcome::Solvable
    }
}

/// Evaluates every receiver minor of a set at points of one space.
#[derive(Debug, Clone)]
pub struct Checker {
    field: Field,
    space: PointSpace,
    minors: Vec<CompiledMinor>,
}

impl Checker {
    pub fn new(lat: &Lattice, rs: &ReceiverSet, field: &Field) -> Self {
        let space = rs.space(lat, field.order());
        let mut minors: Vec<CompiledMinor> = rs
            .minors(lat)
            .iter()
            .map(|m| CompiledMinor::new(m, field))
            .collect();
        if space.nonzero {
            minors.retain(|m| !m.never_zero_on_nonzero_points());
        }
        Checker {
            field: field.clone(),
            space,
            minors,
        }
    }

    pub fn space(&self) -> PointSpace {
        self.space
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn accepts(&self, point: &[u8]) -> bool {
        self.minors.iter().all(|m| m.eval(&self.field, point) != 0)
    }

    /// First point index in `range` accepted by every minor, and the number of
    /// points looked at.
    pub fn scan(&self, range: Range<u64>) -> (Option<u64>, u64) {
        if range.is_empty() {
            return (None, 0);
        }
        let mut order: Vec<usize> = (0..self.minors.len()).collect();
        let mut point = vec![0u8; self.space.k];
        self.space.point_at(range.start, &mut point);
        let mut index = range.start;
        loop {
            // move the minor that vanished to the front; it tends to vanish again
            match order
                .iter()
                .position(|&m| self.minors[m].eval(&self.field, &point) == 0)
            {
                None => return (Some(index), index - range.start + 1),
                Some(0) => {}
                Some(pos) => {
                    let m = order.remove(pos);
                    order.insert(0, m);
                }
            }
            index += 1;
            if index == range.end || !self.space.advance(&mut point) {
                return (None, index - range.start);
            }
        }
    }

    /// Samples `trials` uniform points from a ChaCha8 stream seeded with
    /// `seed`; returns the first accepted one and the number drawn.
    pub fn sample(&self, seed: u64, trials: u64) -> (Option<Vec<u8>>, u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lo = self.space.nonzero as u8;
        let hi = self.space.q as u8;
        let mut point = vec![0u8; self.space.k];
        for t in 0..trials {
            for slot in point.iter_mut() {
                *slot = rng.gen_range(lo..hi);
            }
            if self.accepts(&point) {
                return (Some(point), t + 1);
            }
        }
        (None, trials)
    }
}

/// Decides solvability of `rs` over `field`. Exhaustive scans are exact;
/// randomized runs can only prove solvability.
pub fn is_solvable(
    lat: &Lattice,
    rs: &ReceiverSet,
    field: &Field,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let checker = Checker::new(lat, rs, field);
    solve_with(&checker, opts, |c, len| c.scan(0..len))
}

/// Shared driver; `scan` runs the exhaustive pass so callers can
/// parallelise it.
pub fn solve_with(
    checker: &Checker,
    opts: &SolveOptions,
    scan: impl FnOnce(&Checker, u64) -> (Option<u64>, u64),
) -> Result<SolveResult> {
    let space = checker.space();
    let exhaustive = match opts.strategy {
        Strategy::Exhaustive => {
            space.check_budget(opts.budget_points)?;
            true
        }
        Strategy::Randomized => false,
        Strategy::Auto => space.check_budget(opts.budget_points).is_ok(),
    };
    let q = space.q;
    if exhaustive {
        let len = space.len() as u64;
        let (found, examined) = scan(checker, len);
        let witness = found.map(|idx| {
            let mut pt = vec![0u8; space.k];
            space.point_at(idx, &mut pt);
            pt
        });
        let outcome = if witness.is_some() {
            Outcome::Solvable
        } else {
            Outcome::Unsolvable
        };
        Ok(SolveResult {
            q,
            outcome,
            witness,
            mode: Mode::Exhaustive,
            points_examined: examined,
            space_size: space.len(),
            seed: None,
        })
    } else {
        let (witness, drawn) = checker.sample(opts.seed, opts.trials);
        let outcome = if witness.is_some() {
            Outcome::Solvable
        } else {
            Outcome::Unknown
        };
        Ok(SolveResult {
            q,
            outcome,
            witness,
            mode: Mode::Randomized,
            points_examined: drawn,
            space_size: space.len(),
            seed: Some(opts.seed),
        })
    }
}

/// True iff every receiver minor (sides included when flagged) is nonzero at
/// `point`.
pub fn verify_witness(
    lat: &Lattice,
    rs: &ReceiverSet,
    field: &Field,
    point: &[u8],
) -> Result<bool> {
    if point.len() != lat.num_vars() {
        return Err(Error::PointLength {
            expected: lat.num_vars(),
            got: point.len(),
        });
    }
    for &v in point {
        field.check_element(u32::from(v))?;
    }
    for m in rs.minors(lat) {
        if field.eval(&m, point)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinFieldReport {
    /// The minimum field order, when every smaller order was ruled out
    /// exhaustively and a witness was found at this one.
    pub exact: Option<u32>,
    /// Every supported order below this one is proven unsolvable.
    pub lower_bound: u32,
    /// Smallest order with a witness, if any was found.
    pub witness: Option<(u32, Vec<u8>)>,
    /// Largest order the search would try.
    pub search_limit: u32,
    pub attempts: Vec<SolveResult>,
    /// Set when the search stopped early on an exhaustive budget.
    pub stopped_by_budget: bool,
}

/// Largest order tried by [`min_field`]: the first supported order at least
/// the number of receivers, which is known to suffice for multicast.
pub fn min_field_search_limit(rs: &ReceiverSet) -> u32 {
    let need = rs.receiver_count().max(2) as u32;
    Field::supported_orders()
        .into_iter()
        .find(|&q| q >= need)
        .unwrap_or(255)
}

/// Smallest `q` over which `rs` is solvable. Each order is tested on its
/// own; nothing is inferred from neighbouring orders.
pub fn min_field(lat: &Lattice, rs: &ReceiverSet, opts: &SolveOptions) -> Result<MinFieldReport> {
    min_field_with(rs, |q| {
        let field = Field::new(q)?;
        is_solvable(lat, rs, &field, opts)
    })
}

pub fn min_field_with(
    rs: &ReceiverSet,
    mut solve: impl FnMut(u32) -> Result<SolveResult>,
) -> Result<MinFieldReport> {
    let limit = min_field_search_limit(rs);
    let mut report = MinFieldReport {
        exact: None,
        lower_bound: 2,
        witness: None,
        search_limit: limit,
        attempts: Vec::new(),
        stopped_by_budget: false,
    };
    let mut all_ruled_out = true;
    for q in Field::supported_orders()
        .into_iter()
        .take_while(|&q| q <= limit)
    {
        let res = match solve(q) {
            Ok(r) => r,
            Err(Error::Budget { .. }) => {
                report.stopped_by_budget = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let outcome = res.outcome;
        let witness = res.witness.clone();
        report.attempts.push(res);
        match outcome {
            Outcome::Solvable => {
                if all_ruled_out {
                    report.exact = Some(q);
                }
                report.witness = witness.map(|w| (q, w));
                break;
            }
            Outcome::Unsolvable => {
                if all_ruled_out {
                    report.lower_bound = next_order(q);
                }
            }
            Outcome::Unknown => all_ruled_out = false,
        }
    }
    Ok(report)
}

fn next_order(q: u32) -> u32 {
    Field::supported_orders()
        .into_iter()
        .find(|&o| o > q)
        .unwrap_or(q + 1)
}

/// Product of every receiver minor, sides included when flagged.
pub fn minor_product(lat: &Lattice, rs: &ReceiverSet) -> Poly {
    rs.minors(lat)
        .iter()
        .fold(Poly::one(lat.num_vars()), |acc, m| &acc * &m.to_poly())
}

/// Solvability through the field equations: the product of the minors has a
/// point where it is nonzero iff its remainder modulo `x^q - x` (for every
/// variable) is a nonzero polynomial over `F_p`. With sides present the
/// product contains every variable, so such a point has no zero coordinate
/// and the answer matches the scan over nonzero points.
pub fn solvable_by_reduction(lat: &Lattice, rs: &ReceiverSet, q: u32) -> Result<bool> {
    let field = Field::new(q)?;
    let f = minor_product(lat, rs);
    Ok(!f
        .reduce_field_equations(q, field.characteristic())
        .is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::placement::valid_placements;

    fn lat(n: usize) -> Lattice {
        Lattice::new(n).unwrap()
    }

    fn set(l: &Lattice, ps: &[&[usize]]) -> ReceiverSet {
        let ps = ps
            .iter()
            .map(|p| Placement::new(l, p.iter().copied()).unwrap())
            .collect();
        ReceiverSet::with_sides(l, ps).unwrap()
    }

    const EXHAUSTIVE: SolveOptions = SolveOptions {
        strategy: Strategy::Exhaustive,
        budget_points: 1 << 25,
        trials: 0,
        seed: 0,
    };

    #[test]
    fn receiver_set_rejects_invalid() {
        let l = lat(3);
        let bad = Placement::new(&l, [1, 2, 4]).unwrap();
        assert!(matches!(
            ReceiverSet::with_sides(&l, alloc::vec![bad]),
            Err(Error::InvalidPlacement(_))
        ));
    }

    #[test]
    fn sides_only_all_ones() {
        let l = lat(4);
        let rs = set(&l, &[]);
        for q in [2, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            assert!(verify_witness(&l, &rs, &f, &[1; 12]).unwrap());
        }
        let res = is_solvable(&l, &rs, &Field::new(2).unwrap(), &EXHAUSTIVE).unwrap();
        assert_eq!(res.witness, Some(alloc::vec![1; 12]));
    }

    #[test]
    fn all_ones_fails_with_two_term_minor_over_f2() {
        let l = lat(4);
        let rs = set(&l, &[&[2, 5, 7, 10]]);
        assert!(!verify_witness(&l, &rs, &Field::new(2).unwrap(), &[1; 12]).unwrap());
        assert!(matches!(
            verify_witness(&l, &rs, &Field::new(2).unwrap(), &[1; 11]),
            Err(Error::PointLength { .. })
        ));
        assert!(matches!(
            verify_witness(&l, &rs, &Field::new(2).unwrap(), &[2; 12]),
            Err(Error::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn three_receivers_need_f4() {
        let l = lat(4);
        let rs = set(&l, &[&[2, 5, 7, 10], &[2, 4, 9, 10], &[1, 4, 5, 10]]);
        for q in [2, 3] {
            let r = is_solvable(&l, &rs, &Field::new(q).unwrap(), &EXHAUSTIVE).unwrap();
            assert_eq!(r.outcome, Outcome::Unsolvable);
            assert!(!solvable_by_reduction(&l, &rs, q).unwrap());
        }
        let f4 = Field::new(4).unwrap();
        let r = is_solvable(&l, &rs, &f4, &EXHAUSTIVE).unwrap();
        assert!(verify_witness(&l, &rs, &f4, r.witness.as_ref().unwrap()).unwrap());
        assert!(solvable_by_reduction(&l, &rs, 4).unwrap());
        let report = min_field(&l, &rs, &EXHAUSTIVE).unwrap();
        assert_eq!(report.exact, Some(4));
        assert_eq!(report.lower_bound, 4);
    }

    #[test]
    fn tsn3_min_fields() {
        let l = lat(3);
        let all = valid_placements(&l);
        assert_eq!(all.len(), 17);
        let rs = ReceiverSet::with_sides(&l, all.clone()).unwrap();
        assert_eq!(min_field(&l, &rs, &EXHAUSTIVE).unwrap().exact, Some(3));
        let corner = Placement::new(&l, [1, 3, 6]).unwrap();
        let rest: Vec<_> = all.into_iter().filter(|p| *p != corner).collect();
        let rs = ReceiverSet::with_sides(&l, rest).unwrap();
        let report = min_field(&l, &rs, &EXHAUSTIVE).unwrap();
        assert_eq!(report.exact, Some(2));
        assert_eq!(report.witness, Some((2, alloc::vec![1; 6])));
    }

    #[test]
    fn reduction_agrees_with_scan_on_single_receivers() {
        let l = lat(3);
        for p in valid_placements(&l) {
            for include_sides in [true, false] {
                let rs = ReceiverSet::new(&l, alloc::vec![p.clone()], include_sides).unwrap();
                for q in [2, 3, 4, 5] {
                    let f = Field::new(q).unwrap();
                    let scan = is_solvable(&l, &rs, &f, &EXHAUSTIVE).unwrap().is_solvable();
                    assert_eq!(
                        solvable_by_reduction(&l, &rs, q).unwrap(),
                        scan,
                        "{p} q={q} sides={include_sides}"
                    );
                }
            }
        }
    }

    #[test]
    fn randomized_mode_is_seeded() {
        let l = lat(4);
        let rs = set(&l, &[&[2, 5, 7, 10], &[2, 4, 9, 10], &[1, 4, 5, 10]]);
        let f4 = Field::new(4).unwrap();
        let opts = SolveOptions {
            strategy: Strategy::Randomized,
            budget_points: 0,
            trials: 100_000,
            seed: 7,
        };
        let a = is_solvable(&l, &rs, &f4, &opts).unwrap();
        let b = is_solvable(&l, &rs, &f4, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mode, Mode::Randomized);
        assert!(verify_witness(&l, &rs, &f4, a.witness.as_ref().unwrap()).unwrap());
        let f3 = Field::new(3).unwrap();
        let c = is_solvable(
            &l,
            &rs,
            &f3,
            &SolveOptions {
                trials: 500,
                ..opts
            },
        )
        .unwrap();
        assert_eq!(c.outcome, Outcome::Unknown);
    }

    #[test]
    fn exhaustive_budget_is_an_error() {
        let l = lat(4);
        let rs = set(&l, &[]);
        let opts = SolveOptions {
            budget_points: 10,
            ..EXHAUSTIVE
        };
        assert!(matches!(
            is_solvable(&l, &rs, &Field::new(3).unwrap(), &opts),
            Err(Error::Budget { .. })
        ));
        let report = min_field(&l, &set(&l, &[&[2, 5, 7, 10]]), &opts).unwrap();
        // q = 2 has a single nonzero point, q = 3 is over budget
        assert_eq!(report.exact, None);
        assert!(report.stopped_by_budget);
        assert_eq!(report.lower_bound, 3);
    }

    #[test]
    fn scan_ranges_compose() {
        let l = lat(4);
        let rs = set(&l, &[&[2, 5, 7, 10], &[2, 4, 9, 10]]);
        let f = Field::new(3).unwrap();
        let checker = Checker::new(&l, &rs, &f);
        let len = checker.space().len() as u64;
        let (whole, _) = checker.scan(0..len);
        let first_chunked = (0..len)
            .step_by(97)
            .find_map(|s| checker.scan(s..(s + 97).min(len)).0);
        assert_eq!(whole, first_chunked);
    }
}
