//! The lattice `TSN(n)`: coordinates, enumeration, edges, triangles and the
//! rotation/reflection symmetries.
//!
//! Vertices are identified externally by their enumeration index: level by
//! level from the top (the `n` sources), and by increasing `x` inside a level.
//! Indices are 1-based, so `TSN(3)` reads
//!
//! ```text
//!   1   2   3        (0,2) (1,1) (2,0)
//!     4   5             (0,1) (1,0)
//!       6                  (0,0)
//! ```

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest supported length. Vertex sets and edge-variable sets are packed
/// into `u128` masks, which caps `n(n-1)` at 128.
pub const MAX_LENGTH: usize = 11;

/// Bitmask over vertices; bit `i - 1` stands for enumeration index `i`.
pub type VertexMask = u128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
}

impl Vertex {
    pub const fn new(x: usize, y: usize) -> Self {
        Vertex { x, y }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Which parent an edge comes from. The left parent of `(x,y)` is `(x,y+1)`,
/// the right parent is `(x+1,y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Transfer coefficient `a{i}_{j}`: the edge into vertex `i + n` from its
/// left (`j = 1`) or right (`j = 2`) parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeVar {
    pub i: usize,
    pub j: u8,
}

impl EdgeVar {
    pub const fn new(i: usize, j: u8) -> Self {
        EdgeVar { i, j }
    }

    /// Position in the canonical variable order (`i` ascending, then `j`).
    pub const fn bit(self) -> usize {
        2 * (self.i - 1) + (self.j as usize - 1)
    }

    pub const fn from_bit(bit: usize) -> Self {
        EdgeVar {
            i: bit / 2 + 1,
            j: (bit % 2) as u8 + 1,
        }
    }

    pub const fn side(self) -> Side {
        if self.j == 1 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

impl fmt::Display for EdgeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}_{}", self.i, self.j)
    }
}

/// A sub-lattice isomorphic to `TSN(k)`, given by its bottom vertex and length.
///
/// It holds the vertices `(a,b)` with `a >= x`, `b >= y` and
/// `a + b <= x + y + k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub corner: Vertex,
    pub k: usize,
}

impl Triangle {
    pub const fn new(corner: Vertex, k: usize) -> Self {
        Triangle { corner, k }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x >= self.corner.x
            && v.y >= self.corner.y
            && v.x + v.y < self.corner.x + self.corner.y + self.k
    }

    pub fn fits(&self, n: usize) -> bool {
        self.k >= 1 && self.corner.x + self.corner.y + self.k <= n
    }

    pub fn vertex_count(&self) -> usize {
        self.k * (self.k + 1) / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let Vertex { x, y } = self.corner;
        (0..self.k).flat_map(move |dx| (0..self.k - dx).map(move |dy| Vertex::new(x + dx, y + dy)))
    }

    /// The `(k+1)`-triangle holding this one and every parent of its vertices.
    pub fn extension(&self, n: usize) -> Option<Triangle> {
        let t = Triangle::new(self.corner, self.k + 1);
        t.fits(n).then_some(t)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-triangle at {}", self.k, self.corner)
    }
}

#[derive(Debug, Clone)]
pub struct Lattice {
    n: usize,
    coords: Vec<Vertex>,
    triangles: Vec<Triangle>,
    triangle_masks: Vec<VertexMask>,
    /// Per vertex (0-based), the ids of the triangles that contain it.
    containing: Vec<Vec<u32>>,
}

impl Lattice {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_LENGTH {
            return Err(Error::UnsupportedLength(n));
        }
        let mut coords = Vec::with_capacity(n * (n + 1) / 2);
        for level in 1..=n {
            let sum = n - level;
            for x in 0..=sum {
                coords.push(Vertex::new(x, sum - x));
            }
        }

        let mut lattice = Lattice {
            n,
            coords,
            triangles: Vec::new(),
            triangle_masks: Vec::new(),
            containing: Vec::new(),
        };
        let mut triangles = Vec::new();
        for k in 1..=n {
            for s in 0..=(n - k) {
                for x in 0..=s {
                    triangles.push(Triangle::new(Vertex::new(x, s - x), k));
                }
            }
        }
        let masks: Vec<VertexMask> = triangles
            .iter()
            .map(|t| lattice.mask_of_vertices(t.vertices()))
            .collect();
        let mut containing = alloc::vec![Vec::new(); lattice.vertex_count()];
        for (id, mask) in masks.iter().enumerate() {
            for (v, list) in containing.iter_mut().enumerate() {
                if mask >> v & 1 == 1 {
                    list.push(id as u32);
                }
            }
        }
        lattice.triangles = triangles;
        lattice.triangle_masks = masks;
        lattice.containing = containing;
        Ok(lattice)
    }

    /// The length `n`.
    pub fn length(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Number of transfer coefficients, `n(n-1)`.
    pub fn num_vars(&self) -> usize {
        self.n * (self.n - 1)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x + v.y < self.n
    }

    /// 1-based level, 1 being the sources.
    pub fn level(&self, v: Vertex) -> usize {
        self.n - v.x - v.y
    }

    pub fn index_of(&self, v: Vertex) -> Result<usize> {
        if !self.contains(v) {
            return Err(Error::VertexOutOfRange {
                x: v.x,
                y: v.y,
                n: self.n,
            });
        }
        Ok(self.index_unchecked(v))
    }

    pub(crate) fn index_unchecked(&self, v: Vertex) -> usize {
        let before = self.level(v) - 1;
        before * self.n - before * before.saturating_sub(1) / 2 + v.x + 1
    }

    pub fn vertex(&self, index: usize) -> Result<Vertex> {
        self.check_index(index)?;
        Ok(self.coords[index - 1])
    }

    pub(crate) fn vertex_unchecked(&self, index: usize) -> Vertex {
        self.coords[index - 1]
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.vertex_count() {
            return Err(Error::IndexOutOfRange {
                index,
                count: self.vertex_count(),
            });
        }
        Ok(())
    }

    pub fn is_source(&self, index: usize) -> bool {
        (1..=self.n).contains(&index)
    }

    /// `(left, right)` parents; both `None` for a source.
    pub fn parents(&self, v: Vertex) -> (Option<Vertex>, Option<Vertex>) {
        if v.x + v.y + 1 < self.n {
            (
                Some(Vertex::new(v.x, v.y + 1)),
                Some(Vertex::new(v.x + 1, v.y)),
            )
        } else {
            (None, None)
        }
    }

    pub fn parent_indices(&self, index: usize) -> (Option<usize>, Option<usize>) {
        let (l, r) = self.parents(self.vertex_unchecked(index));
        (
            l.map(|v| self.index_unchecked(v)),
            r.map(|v| self.index_unchecked(v)),
        )
    }

    /// `(left, right)` children: `v` is the right parent of its left child
    /// `(x-1,y)` and the left parent of its right child `(x,y-1)`.
    pub fn children(&self, v: Vertex) -> (Option<Vertex>, Option<Vertex>) {
        let left = (v.x > 0).then(|| Vertex::new(v.x - 1, v.y));
        let right = (v.y > 0).then(|| Vertex::new(v.x, v.y - 1));
        (left, right)
    }

    pub fn edge_var(&self, head: Vertex, side: Side) -> Result<EdgeVar> {
        let index = self.index_of(head)?;
        if self.is_source(index) {
            return Err(Error::SourceHasNoParents(index));
        }
        let j = match side {
            Side::Left => 1,
            Side::Right => 2,
        };
        Ok(EdgeVar::new(index - self.n, j))
    }

    /// `(parent, head)` indices of the edge carrying `var`.
    pub fn edge_of(&self, var: EdgeVar) -> Result<(usize, usize)> {
        let head = var.i + self.n;
        if var.i == 0 || !(1..=2).contains(&var.j) || head > self.vertex_count() {
            return Err(Error::IndexOutOfRange {
                index: var.i,
                count: self.vertex_count() - self.n,
            });
        }
        let (l, r) = self.parent_indices(head);
        let parent = if var.j == 1 { l } else { r };
        Ok((parent.expect("non-source has both parents"), head))
    }

    /// Bit position of the edge `parent -> head` for a non-source `head`.
    pub(crate) fn edge_bit(&self, parent: usize, head: usize) -> usize {
        let (l, _) = self.parent_indices(head);
        let j = if l == Some(parent) { 0 } else { 1 };
        2 * (head - self.n - 1) + j
    }

    /// Rotation `(x,y) -> (n-1-x-y, x)`; order 3.
    pub fn rotate(&self, v: Vertex) -> Vertex {
        Vertex::new(self.n - 1 - v.x - v.y, v.x)
    }

    /// Reflection `(x,y) -> (y,x)`; order 2.
    pub fn reflect(&self, v: Vertex) -> Vertex {
        Vertex::new(v.y, v.x)
    }

    pub fn rotate_index(&self, index: usize) -> usize {
        self.index_unchecked(self.rotate(self.vertex_unchecked(index)))
    }

    pub fn reflect_index(&self, index: usize) -> usize {
        self.index_unchecked(self.reflect(self.vertex_unchecked(index)))
    }

    /// Every well-formed triangle, ordered by length and then by corner index.
    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub(crate) fn triangle_masks(&self) -> &[VertexMask] {
        &self.triangle_masks
    }

    /// Ids (into [`Lattice::triangles`]) of the triangles containing the
    /// vertex with the given index.
    pub(crate) fn triangles_containing(&self, index: usize) -> &[u32] {
        &self.containing[index - 1]
    }

    pub fn triangle_mask(&self, t: &Triangle) -> VertexMask {
        self.mask_of_vertices(t.vertices())
    }

    fn mask_of_vertices(&self, vs: impl Iterator<Item = Vertex>) -> VertexMask {
        vs.fold(0, |m, v| m | 1 << (self.index_unchecked(v) - 1))
    }

    pub fn sources(&self) -> Vec<usize> {
        (1..=self.n).collect()
    }

    /// The `x = 0` side, top to bottom.
    pub fn left_side(&self) -> Vec<usize> {
        (0..self.n)
            .rev()
            .map(|y| self.index_unchecked(Vertex::new(0, y)))
            .collect()
    }

    /// The `y = 0` side, top to bottom.
    pub fn right_side(&self) -> Vec<usize> {
        (0..self.n)
            .rev()
            .map(|x| self.index_unchecked(Vertex::new(x, 0)))
            .collect()
    }

    pub fn vars(&self) -> impl Iterator<Item = EdgeVar> {
        (0..self.num_vars()).map(EdgeVar::from_bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn lat(n: usize) -> Lattice {
        Lattice::new(n).unwrap()
    }

    #[test]
    fn index_of_examples() {
        assert_eq!(lat(3).index_of(Vertex::new(0, 2)).unwrap(), 1);
        assert_eq!(lat(3).index_of(Vertex::new(0, 0)).unwrap(), 6);
        assert_eq!(lat(4).index_of(Vertex::new(1, 0)).unwrap(), 9);
        assert!(matches!(
            lat(3).index_of(Vertex::new(2, 1)),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn index_matches_brute_enumeration() {
        for n in 1..=9 {
            let l = lat(n);
            // enumerate by (level, x) directly
            let mut all: alloc::vec::Vec<(usize, usize, Vertex)> = alloc::vec::Vec::new();
            for x in 0..n {
                for y in 0..n - x {
                    all.push((n - x - y, x, Vertex::new(x, y)));
                }
            }
            all.sort();
            for (pos, (_, _, v)) in all.iter().enumerate() {
                assert_eq!(l.index_of(*v).unwrap(), pos + 1);
                assert_eq!(l.vertex(pos + 1).unwrap(), *v);
            }
            assert_eq!(all.len(), l.vertex_count());
        }
    }

    #[test]
    fn parents_examples() {
        let l3 = lat(3);
        let (a, b) = l3.parent_indices(4);
        assert_eq!((a, b), (Some(1), Some(2)));
        for s in 1..=3 {
            assert_eq!(l3.parent_indices(s), (None, None));
        }
        let l4 = lat(4);
        assert_eq!(l4.parent_indices(10), (Some(8), Some(9)));
    }

    #[test]
    fn edge_var_examples() {
        let l4 = lat(4);
        assert_eq!(
            l4.edge_var(Vertex::new(0, 2), Side::Right).unwrap(),
            EdgeVar::new(1, 2)
        );
        assert_eq!(
            l4.edge_var(Vertex::new(0, 0), Side::Left).unwrap(),
            EdgeVar::new(6, 1)
        );
        assert_eq!(
            lat(3).edge_var(Vertex::new(0, 1), Side::Left).unwrap(),
            EdgeVar::new(1, 1)
        );
        assert_eq!(
            l4.edge_var(Vertex::new(3, 0), Side::Left),
            Err(Error::SourceHasNoParents(4))
        );
    }

    #[test]
    fn edges_and_vars_are_in_bijection() {
        for n in 1..=MAX_LENGTH {
            let l = lat(n);
            let mut seen = BTreeSet::new();
            for head in n + 1..=l.vertex_count() {
                let v = l.vertex(head).unwrap();
                for side in [Side::Left, Side::Right] {
                    let var = l.edge_var(v, side).unwrap();
                    let (parent, h) = l.edge_of(var).unwrap();
                    assert_eq!(h, head);
                    assert_eq!(l.edge_bit(parent, head), var.bit());
                    assert_eq!(EdgeVar::from_bit(var.bit()), var);
                    assert!(seen.insert(var));
                }
            }
            assert_eq!(seen.len(), n * (n - 1));
            assert_eq!(l.num_vars(), seen.len());
        }
    }

    #[test]
    fn symmetry_examples() {
        let l = lat(3);
        let rot: BTreeSet<_> = [1, 4, 5].iter().map(|&i| l.rotate_index(i)).collect();
        let refl: BTreeSet<_> = [1, 4, 5].iter().map(|&i| l.reflect_index(i)).collect();
        assert_eq!(rot.into_iter().collect::<alloc::vec::Vec<_>>(), [2, 5, 6]);
        assert_eq!(refl.into_iter().collect::<alloc::vec::Vec<_>>(), [3, 4, 5]);
    }

    #[test]
    fn symmetry_orders_and_sides() {
        for n in 1..=9 {
            let l = lat(n);
            for i in 1..=l.vertex_count() {
                let r3 = l.rotate_index(l.rotate_index(l.rotate_index(i)));
                assert_eq!(r3, i);
                assert_eq!(l.reflect_index(l.reflect_index(i)), i);
            }
            let set = |v: alloc::vec::Vec<usize>| v.into_iter().collect::<BTreeSet<_>>();
            let map = |f: &dyn Fn(usize) -> usize, v: alloc::vec::Vec<usize>| {
                v.into_iter().map(f).collect::<BTreeSet<_>>()
            };
            assert_eq!(
                map(&|i| l.reflect_index(i), l.left_side()),
                set(l.right_side())
            );
            assert_eq!(map(&|i| l.reflect_index(i), l.sources()), set(l.sources()));
            assert_eq!(
                map(&|i| l.rotate_index(i), l.left_side()),
                set(l.right_side())
            );
            assert_eq!(
                map(&|i| l.rotate_index(i), l.right_side()),
                set(l.sources())
            );
        }
    }

    #[test]
    fn symmetries_preserve_adjacency() {
        for n in 2..=8 {
            let l = lat(n);
            let mut dag = BTreeSet::new();
            for head in n + 1..=l.vertex_count() {
                let (a, b) = l.parent_indices(head);
                for p in [a.unwrap(), b.unwrap()] {
                    dag.insert((p.min(head), p.max(head)));
                }
            }
            for &(u, v) in &dag {
                let (a, b) = (l.reflect_index(u), l.reflect_index(v));
                assert!(dag.contains(&(a.min(b), a.max(b))));
            }
            // the full triangular grid also has the (1,-1) direction
            let adjacent = |u: usize, v: usize| {
                let (p, q) = (l.vertex(u).unwrap(), l.vertex(v).unwrap());
                let d = (p.x as i64 - q.x as i64, p.y as i64 - q.y as i64);
                matches!(d, (1, 0) | (-1, 0) | (0, 1) | (0, -1) | (1, -1) | (-1, 1))
            };
            for u in 1..=l.vertex_count() {
                for v in 1..=l.vertex_count() {
                    assert_eq!(
                        adjacent(u, v),
                        adjacent(l.rotate_index(u), l.rotate_index(v))
                    );
                }
            }
        }
    }

    #[test]
    fn triangle_counts() {
        let l = lat(3);
        let by_k = |l: &Lattice, k| l.triangles().iter().filter(|t| t.k == k).count();
        assert_eq!((by_k(&l, 1), by_k(&l, 2), by_k(&l, 3)), (6, 3, 1));
        assert_eq!(lat(1).triangles().len(), 1);
        assert_eq!(by_k(&lat(4), 2), 6);
        for n in 1..=9 {
            let l = lat(n);
            for k in 1..=n {
                assert_eq!(by_k(&l, k), (n - k + 1) * (n - k + 2) / 2);
            }
            for t in l.triangles() {
                assert!(t.fits(n));
                assert_eq!(l.triangle_mask(t).count_ones() as usize, t.vertex_count());
                for v in t.vertices() {
                    assert!(t.contains(v));
                }
            }
        }
    }

    #[test]
    fn extension_contains_parents() {
        for n in 1..=7 {
            let l = lat(n);
            for t in l.triangles() {
                match t.extension(n) {
                    Some(e) => {
                        assert_eq!(e.k, t.k + 1);
                        for v in t.vertices() {
                            assert!(e.contains(v));
                            let (a, b) = l.parents(v);
                            for p in [a, b].into_iter().flatten() {
                                assert!(e.contains(p));
                            }
                        }
                    }
                    None => assert!(t.corner.x + t.corner.y + t.k == n),
                }
            }
        }
    }

    #[test]
    fn unsupported_lengths() {
        assert_eq!(Lattice::new(0).unwrap_err(), Error::UnsupportedLength(0));
        assert!(Lattice::new(MAX_LENGTH + 1).is_err());
    }
}
