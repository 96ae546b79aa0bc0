//! Minor polynomials of receiver placements.
//!
//! Give the sources the standard basis and every other vertex the
//! `a`-weighted sum of its parents' vectors. The maximal minor at a
//! placement's columns is then the signed sum, over all families of
//! vertex-disjoint source-to-label paths, of the product of the edge
//! variables those paths use. [`minor`] builds it that way. [`all_systems`]
//! and [`symbolic_det`] are the two independent routes it is tested against:
//! the expansion over every (possibly intersecting) path family, and the
//! literal determinant of the labeling matrix.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use itertools::Itertools;

use crate::lattice::{EdgeVar, Lattice, Vertex, VertexMask};
use crate::placement::Placement;
use crate::poly::Poly;
use crate::{Error, Result};

/// Set of edge variables as a bitmask in canonical order (`a1_1` is bit 0,
/// `a1_2` bit 1, `a2_1` bit 2, ...).
///
/// Ordering is lexicographic on the ascending list of variables, which is the
/// order terms are printed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VarSet(pub u128);

impl VarSet {
    pub fn contains(self, bit: usize) -> bool {
        self.0 >> bit & 1 == 1
    }

    pub fn insert(&mut self, bit: usize) {
        self.0 |= 1 << bit;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn bits(self) -> impl Iterator<Item = usize> {
        (0..128).filter(move |&b| self.0 >> b & 1 == 1)
    }

    pub fn vars(self) -> impl Iterator<Item = EdgeVar> {
        self.bits().map(EdgeVar::from_bit)
    }
}

impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let d = diff.trailing_zeros();
        // Below `d` both lists agree. The side holding `d` is smaller unless
        // the other list has already ended.
        let (with_d, without_d) = if self.0 >> d & 1 == 1 {
            (Ordering::Less, other.0)
        } else {
            (Ordering::Greater, self.0)
        };
        if without_d >> d == 0 {
            with_d.reverse()
        } else {
            with_d
        }
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub vars: VarSet,
    pub coeff: i64,
}

/// A multilinear integer polynomial in the edge variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinorPolynomial {
    num_vars: usize,
    terms: Vec<Term>,
}

impl MinorPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        MinorPolynomial {
            num_vars,
            terms: Vec::new(),
        }
    }

    /// Collects terms, merging equal variable sets and dropping zeros.
    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut terms: Vec<Term> = terms.into_iter().collect();
        terms.sort_by_key(|a| a.vars);
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.vars == t.vars => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0);
        MinorPolynomial {
            num_vars,
            terms: merged,
        }
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        let mut terms = Vec::with_capacity(p.len());
        for (e, c) in p.terms() {
            let mut vars = VarSet::default();
            for (bit, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => vars.insert(bit),
                    _ => return Err(Error::NotMultilinear),
                }
            }
            terms.push(Term { vars, coeff: c });
        }
        Ok(Self::from_terms(p.nvars(), terms))
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(
            self.num_vars,
            self.terms.iter().map(|t| {
                let mut e = vec![0u8; self.num_vars];
                for b in t.vars.bits() {
                    e[b] = 1;
                }
                (e, t.coeff)
            }),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Union of the variables appearing in any term.
    pub fn support(&self) -> VarSet {
        VarSet(self.terms.iter().fold(0, |m, t| m | t.vars.0))
    }

    pub fn negated(&self) -> Self {
        MinorPolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    vars: t.vars,
                    coeff: -t.coeff,
                })
                .collect(),
        }
    }

    pub fn eq_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == other.negated()
    }

    /// Product of two minors, `None` if some variable would appear twice.
    pub fn mul_disjoint(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                if a.vars.0 & b.vars.0 != 0 {
                    return None;
                }
                out.push(Term {
                    vars: VarSet(a.vars.0 | b.vars.0),
                    coeff: a.coeff * b.coeff,
                });
            }
        }
        Some(Self::from_terms(self.num_vars, out))
    }

    /// Parses the printed form, e.g. `"a2_2*a5_1 - a3_1*a5_2"`.
    pub fn parse(num_vars: usize, s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(alloc::format!("{what} in polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Self::zero(num_vars));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (chunk, tail) = body.split_at(end);
            rest = tail;
            let mut coeff = sign;
            let mut vars = VarSet::default();
            for factor in chunk.split('*') {
                if let Some(v) = factor.strip_prefix('a') {
                    let (i, j) = v.split_once('_').ok_or_else(|| bad("bad variable"))?;
                    let i: usize = i.parse().map_err(|_| bad("bad variable index"))?;
                    let j: u8 = j.parse().map_err(|_| bad("bad variable side"))?;
                    if i == 0 || !(1..=2).contains(&j) {
                        return Err(bad("variable out of range"));
                    }
                    let bit = EdgeVar::new(i, j).bit();
                    if bit >= num_vars || vars.contains(bit) {
                        return Err(bad("variable out of range or repeated"));
                    }
                    vars.insert(bit);
                } else {
                    coeff *= factor.parse::<i64>().map_err(|_| bad("bad factor"))?;
                }
            }
            terms.push(Term { vars, coeff });
        }
        Ok(Self::from_terms(num_vars, terms))
    }
}

impl fmt::Display for MinorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            match (k, t.coeff < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = t.coeff.unsigned_abs();
            let mut first = true;
            if mag != 1 || t.vars.is_empty() {
                write!(f, "{mag}")?;
                first = false;
            }
            for v in t.vars.vars() {
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// One path per source, in source order; `sigma[i]` is the position (in the
/// sorted labels) of the label reached from source `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathSystem {
    pub paths: Vec<Vec<usize>>,
    pub sigma: Vec<usize>,
    pub sign: i8,
}

impl PathSystem {
    /// `labels` must be sorted and every path must end at one of them.
    pub fn from_paths(_lat: &Lattice, labels: &[usize], paths: Vec<Vec<usize>>) -> Self {
        let sigma: Vec<usize> = paths
            .iter()
            .map(|p| {
                labels
                    .binary_search(p.last().expect("non-empty path"))
                    .expect("path ends at a label")
            })
            .collect();
        let sign = permutation_sign(&sigma);
        PathSystem { paths, sigma, sign }
    }

    /// Multiset of edges used, as an exponent vector over the variables.
    pub fn exponents(&self, lat: &Lattice) -> Vec<u8> {
        let mut e = vec![0u8; lat.num_vars()];
        for path in &self.paths {
            for w in path.windows(2) {
                e[lat.edge_bit(w[0], w[1])] += 1;
            }
        }
        e
    }

    pub fn edges(&self, lat: &Lattice) -> VarSet {
        let mut set = VarSet::default();
        for path in &self.paths {
            for w in path.windows(2) {
                set.insert(lat.edge_bit(w[0], w[1]));
            }
        }
        set
    }

    pub fn is_vertex_disjoint(&self) -> bool {
        let mut seen: VertexMask = 0;
        for &v in self.paths.iter().flatten() {
            if seen >> (v - 1) & 1 == 1 {
                return false;
            }
            seen |= 1 << (v - 1);
        }
        true
    }

    /// Full structural check: each path starts at its source, walks lattice
    /// edges downwards, ends at a distinct label, and paths share no vertex.
    pub fn check(&self, lat: &Lattice, labels: &[usize]) -> bool {
        if self.paths.len() != lat.length() || !self.is_vertex_disjoint() {
            return false;
        }
        let mut reached: Vec<usize> = Vec::new();
        for (i, path) in self.paths.iter().enumerate() {
            if path.first() != Some(&(i + 1)) {
                return false;
            }
            for w in path.windows(2) {
                let (l, r) = lat.parent_indices(w[1]);
                if lat.check_index(w[1]).is_err() || (l != Some(w[0]) && r != Some(w[0])) {
                    return false;
                }
            }
            reached.push(*path.last().unwrap());
        }
        reached.sort_unstable();
        reached == labels
    }
}

/// Sign of a permutation given as images of `0..n`.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let inversions = perm
        .iter()
        .tuple_combinations()
        .filter(|(a, b)| a > b)
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn can_reach(from: Vertex, to: Vertex) -> bool {
    from.x >= to.x && from.y >= to.y
}

/// Every directed path from `from` to `to`, as vertex index lists, avoiding
/// the vertices in `blocked` (other than the endpoint).
fn paths_between(lat: &Lattice, from: usize, to: usize, blocked: VertexMask) -> Vec<Vec<usize>> {
    fn walk(
        lat: &Lattice,
        v: usize,
        target: Vertex,
        to: usize,
        blocked: VertexMask,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == to {
            out.push(path.clone());
            return;
        }
        let (l, r) = lat.children(lat.vertex_unchecked(v));
        for c in [l, r].into_iter().flatten() {
            if !can_reach(c, target) {
                continue;
            }
            let ci = lat.index_unchecked(c);
            if ci != to && blocked >> (ci - 1) & 1 == 1 {
                continue;
            }
            path.push(ci);
            walk(lat, ci, target, to, blocked, path, out);
            path.pop();
        }
    }
    let target = lat.vertex_unchecked(to);
    let mut out = Vec::new();
    if can_reach(lat.vertex_unchecked(from), target) {
        walk(lat, from, target, to, blocked, &mut vec![from], &mut out);
    }
    out
}

/// All families of vertex-disjoint source-to-label paths for `p`.
pub fn disjoint_systems(lat: &Lattice, p: &Placement) -> Vec<PathSystem> {
    struct Search<'a> {
        lat: &'a Lattice,
        labels: &'a [usize],
        label_mask: VertexMask,
        paths: Vec<Vec<usize>>,
        out: Vec<PathSystem>,
    }

    fn place(s: &mut Search<'_>, src: usize, used: VertexMask, taken: VertexMask) {
        let n = s.lat.length();
        if src > n {
            let ps = PathSystem::from_paths(s.lat, s.labels, s.paths.clone());
            s.out.push(ps);
            return;
        }
        if s.label_mask >> (src - 1) & 1 == 1 {
            // a labelled source can only be matched to itself
            s.paths.push(vec![src]);
            place(s, src + 1, used | 1 << (src - 1), taken | 1 << (src - 1));
            s.paths.pop();
            return;
        }
        for &label in s.labels {
            if taken >> (label - 1) & 1 == 1 {
                continue;
            }
            // a path may not run through another label or a used vertex
            let blocked = used | s.label_mask;
            for path in paths_between(s.lat, src, label, blocked) {
                let mask = path.iter().fold(0, |m: VertexMask, &v| m | 1 << (v - 1));
                s.paths.push(path);
                place(s, src + 1, used | mask, taken | 1 << (label - 1));
                s.paths.pop();
            }
        }
    }

    let mut s = Search {
        lat,
        labels: p.labels(),
        label_mask: p.mask(),
        paths: Vec::new(),
        out: Vec::new(),
    };
    place(&mut s, 1, 0, 0);
    s.out
}

/// The minor of `p` as a signed sum over its disjoint path systems.
pub fn minor(lat: &Lattice, p: &Placement) -> MinorPolynomial {
    let terms = disjoint_systems(lat, p).into_iter().map(|s| Term {
        vars: s.edges(lat),
        coeff: i64::from(s.sign),
    });
    MinorPolynomial::from_terms(lat.num_vars(), terms)
}

/// Number of path families (disjoint or not) over all matchings; an upper
/// bound check before [`all_systems`] materialises them.
pub fn all_systems_count(lat: &Lattice, p: &Placement) -> u128 {
    let n = lat.length();
    let labels = p.labels();
    let count = |s: usize, l: usize| -> u128 {
        let (a, b) = (lat.vertex_unchecked(s), lat.vertex_unchecked(l));
        if !can_reach(a, b) {
            return 0;
        }
        let (dx, dy) = ((a.x - b.x) as u64, (a.y - b.y) as u64);
        u128::from(crate::binomial(dx + dy, dx))
    };
    (0..n)
        .permutations(n)
        .map(|sigma| {
            sigma
                .iter()
                .enumerate()
                .map(|(i, &c)| count(i + 1, labels[c]))
                .product::<u128>()
        })
        .sum()
}

/// Every family of source-to-label paths, intersecting or not, over every
/// matching of sources to labels. Errors when more than `limit` families
/// exist.
pub fn all_systems(lat: &Lattice, p: &Placement, limit: u128) -> Result<Vec<PathSystem>> {
    let required = all_systems_count(lat, p);
    if required > limit {
        return Err(Error::Budget {
            what: "path family enumeration",
            required,
            limit,
        });
    }
    let n = lat.length();
    let labels = p.labels();
    let mut out = Vec::new();
    for sigma in (0..n).permutations(n) {
        let per_source: Vec<Vec<Vec<usize>>> = sigma
            .iter()
            .enumerate()
            .map(|(i, &c)| paths_between(lat, i + 1, labels[c], 0))
            .collect();
        if per_source.iter().any(|v| v.is_empty()) {
            continue;
        }
        let sign = permutation_sign(&sigma);
        for choice in per_source.into_iter().multi_cartesian_product() {
            out.push(PathSystem {
                paths: choice,
                sigma: sigma.clone(),
                sign,
            });
        }
    }
    Ok(out)
}

/// Signed sum of the path-variable products over `systems`.
pub fn signed_sum(lat: &Lattice, systems: &[PathSystem]) -> Poly {
    Poly::from_terms(
        lat.num_vars(),
        systems
            .iter()
            .map(|s| (s.exponents(lat), i64::from(s.sign))),
    )
}

/// Columns of the symbolic labeling matrix, one per vertex in index order:
/// sources get the standard basis, every other vertex
/// `a_left * column(left parent) + a_right * column(right parent)`.
pub fn labeling_matrix(lat: &Lattice) -> Vec<Vec<Poly>> {
    let (n, k) = (lat.length(), lat.num_vars());
    let mut cols: Vec<Vec<Poly>> = Vec::with_capacity(lat.vertex_count());
    for s in 1..=n {
        cols.push(
            (1..=n)
                .map(|r| if r == s { Poly::one(k) } else { Poly::zero(k) })
                .collect(),
        );
    }
    for head in n + 1..=lat.vertex_count() {
        let (l, r) = lat.parent_indices(head);
        let (l, r) = (l.unwrap(), r.unwrap());
        let al = Poly::var(k, lat.edge_bit(l, head));
        let ar = Poly::var(k, lat.edge_bit(r, head));
        let col = (0..n)
            .map(|row| &(&al * &cols[l - 1][row]) + &(&ar * &cols[r - 1][row]))
            .collect();
        cols.push(col);
    }
    cols
}

/// The maximal minor of the labeling matrix at `p`'s columns, expanded by
/// the Leibniz formula. Errors if `n!` exceeds `limit`.
pub fn symbolic_det(lat: &Lattice, p: &Placement, limit: u128) -> Result<MinorPolynomial> {
    let n = lat.length();
    let perms: u128 = (1..=n as u128).product();
    if perms > limit {
        return Err(Error::Budget {
            what: "Leibniz expansion",
            required: perms,
            limit,
        });
    }
    let cols = labeling_matrix(lat);
    let k = lat.num_vars();
    let labels = p.labels();
    let mut det = Poly::zero(k);
    for sigma in (0..n).permutations(n) {
        let mut prod = Poly::constant(k, i64::from(permutation_sign(&sigma)));
        for (row, &c) in sigma.iter().enumerate() {
            prod = &prod * &cols[labels[c] - 1][row];
            if prod.is_zero() {
                break;
            }
        }
        det = &det + &prod;
    }
    MinorPolynomial::from_poly(&det)
}

/// Placements with one label per level, each on a side of the lattice.
pub fn one_per_level_side_placements(lat: &Lattice) -> Vec<Placement> {
    let n = lat.length();
    (0..1u32 << (n - 1))
        .map(|choice| {
            let labels = (0..n - 1).map(|lvl| {
                let sum = n - 1 - lvl;
                let v = if choice >> lvl & 1 == 0 {
                    Vertex::new(0, sum)
                } else {
                    Vertex::new(sum, 0)
                };
                lat.index_unchecked(v)
            });
            Placement::new(lat, labels.chain(core::iter::once(lat.vertex_count())))
                .expect("side placement")
        })
        .collect()
}

/// The remaining side labels together with the bottom vertex.
pub fn side_partner(lat: &Lattice, p: &Placement) -> Option<Placement> {
    let n = lat.length();
    let bottom = lat.vertex_count();
    let mut labels = Vec::with_capacity(n);
    for lvl in 1..n {
        let sum = n - lvl;
        let (l, r) = (
            lat.index_unchecked(Vertex::new(0, sum)),
            lat.index_unchecked(Vertex::new(sum, 0)),
        );
        match (p.contains(l), p.contains(r)) {
            (true, false) => labels.push(r),
            (false, true) => labels.push(l),
            _ => return None,
        }
    }
    if !p.contains(bottom) {
        return None;
    }
    labels.push(bottom);
    Placement::new(lat, labels).ok()
}

/// True when the minors of `p` and its side partner multiply to a single
/// monomial holding every edge variable exactly once, with coefficient ±1.
pub fn side_product_check(lat: &Lattice, p: &Placement) -> bool {
    let Some(partner) = side_partner(lat, p) else {
        return false;
    };
    let product = &minor(lat, p).to_poly() * &minor(lat, &partner).to_poly();
    let mut terms = product.terms();
    match (terms.next(), terms.next()) {
        (Some((e, c)), None) => c.abs() == 1 && e.iter().all(|&d| d == 1),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn lat(n: usize) -> Lattice {
        Lattice::new(n).unwrap()
    }

    fn p(l: &Lattice, labels: &[usize]) -> Placement {
        Placement::new(l, labels.iter().copied()).unwrap()
    }

    #[test]
    fn varset_order_is_lexicographic_on_variable_lists() {
        let set = |bits: &[usize]| {
            bits.iter().fold(VarSet::default(), |mut s, &b| {
                s.insert(b);
                s
            })
        };
        let cases: &[(&[usize], &[usize])] = &[
            (&[1, 6, 10], &[2, 7, 10]),
            (&[2, 7, 10], &[2, 8, 11]),
            (&[1], &[1, 2]),
            (&[], &[0]),
            (&[0, 5], &[1]),
        ];
        for (a, b) in cases {
            assert_eq!(set(a).cmp(&set(b)), a.cmp(b), "{a:?} vs {b:?}");
            assert_eq!(set(b).cmp(&set(a)), b.cmp(a));
        }
    }

    #[test]
    fn system_counts() {
        let l = lat(4);
        assert_eq!(disjoint_systems(&l, &p(&l, &[2, 5, 7, 10])).len(), 2);
        assert_eq!(disjoint_systems(&l, &p(&l, &[1, 4, 5, 10])).len(), 3);
        assert_eq!(disjoint_systems(&l, &p(&l, &[1, 5, 8, 10])).len(), 1);
        assert!(disjoint_systems(&l, &p(&l, &[4, 8, 9, 10])).is_empty());
    }

    #[test]
    fn printed_minors() {
        let l = lat(4);
        let m = minor(&l, &p(&l, &[1, 2, 4, 9]));
        assert!(m.eq_up_to_sign(&MinorPolynomial::parse(12, "a2_2*a5_1 + a3_1*a5_2").unwrap()));
        let m = minor(&l, &p(&l, &[1, 3, 4, 8]));
        assert!(m.eq_up_to_sign(&MinorPolynomial::parse(12, "a1_2*a4_1 + a2_1*a4_2").unwrap()));
        assert_eq!(
            minor(&l, &p(&l, &[1, 3, 4, 10])).to_string(),
            "a1_2*a4_1*a6_1 + a2_1*a4_2*a6_1 + a2_1*a5_1*a6_2"
        );
        assert!(minor(&l, &p(&l, &[4, 7, 9, 10])).is_monomial());
        let l3 = lat(3);
        assert_eq!(minor(&l3, &p(&l3, &[1, 2, 4])).to_string(), "0");
    }

    #[test]
    fn sign_follows_column_order() {
        // source 3 reaches column 4 while source 4 sits in column 3: odd
        let l = lat(4);
        let m = minor(&l, &p(&l, &[1, 2, 4, 9]));
        assert!(m.terms().iter().all(|t| t.coeff == -1));
        assert_eq!(m.to_string(), "-a2_2*a5_1 - a3_1*a5_2");
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["0", "1", "-a1_1", "a1_1*a2_2 - 2*a3_1", "-3"] {
            let m = MinorPolynomial::parse(12, s).unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!(MinorPolynomial::parse(2, "a2_1").is_err());
        assert!(MinorPolynomial::parse(12, "a1_3").is_err());
        assert!(MinorPolynomial::parse(12, "a1_1*a1_1").is_err());
        assert!(MinorPolynomial::parse(12, "b1").is_err());
    }

    #[test]
    fn all_systems_examples() {
        let l = lat(4);
        let pl = p(&l, &[1, 2, 4, 9]);
        let psi = all_systems(&l, &pl, 1 << 20).unwrap();
        assert!(psi.len() >= 2);
        assert_eq!(psi.len() as u128, all_systems_count(&l, &pl));
        assert_eq!(
            MinorPolynomial::from_poly(&signed_sum(&l, &psi)).unwrap(),
            minor(&l, &pl)
        );

        let l2 = lat(2);
        for labels in [[1, 2], [1, 3], [2, 3]] {
            let pl = p(&l2, &labels);
            let psi = all_systems(&l2, &pl, 100).unwrap();
            assert_eq!(psi.len(), disjoint_systems(&l2, &pl).len());
        }

        let l3 = lat(3);
        let psi = all_systems(&l3, &p(&l3, &[4, 5, 6]), 1 << 20).unwrap();
        assert!(!psi.is_empty());
        assert!(signed_sum(&l3, &psi).is_zero());

        assert!(matches!(all_systems(&l, &pl, 1), Err(Error::Budget { .. })));
    }

    #[test]
    fn symbolic_det_examples() {
        let l = lat(4);
        let d = symbolic_det(&l, &p(&l, &[2, 4, 9, 10]), 1000).unwrap();
        let printed =
            MinorPolynomial::parse(12, "a1_1*a2_2*a4_1*a5_1*a6_1 + a1_1*a3_1*a4_1*a5_2*a6_1")
                .unwrap();
        assert!(d.eq_up_to_sign(&printed));

        let l3 = lat(3);
        assert!(symbolic_det(&l3, &p(&l3, &[1, 4, 6]), 100)
            .unwrap()
            .is_monomial());

        let l1 = lat(1);
        assert_eq!(
            symbolic_det(&l1, &p(&l1, &[1]), 1).unwrap().to_string(),
            "1"
        );
    }

    #[test]
    fn side_products() {
        let l4 = lat(4);
        assert_eq!(
            side_partner(&l4, &p(&l4, &[1, 5, 8, 10])).unwrap(),
            p(&l4, &[4, 7, 9, 10])
        );
        assert!(side_product_check(&l4, &p(&l4, &[1, 5, 8, 10])));
        let l2 = lat(2);
        let prod = minor(&l2, &p(&l2, &[1, 3]))
            .mul_disjoint(&minor(&l2, &p(&l2, &[2, 3])))
            .unwrap();
        assert!(prod.eq_up_to_sign(&MinorPolynomial::parse(2, "a1_1*a1_2").unwrap()));
        let l5 = lat(5);
        assert!(side_product_check(&l5, &Placement::left_side(&l5)));
        assert!(!side_product_check(&l4, &p(&l4, &[1, 2, 4, 9])));
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign(&[0, 1, 3, 2]), -1);
    }
}
