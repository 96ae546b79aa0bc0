//! Unit-capacity max flow, used as the vertex-disjoint path oracle.
//!
//! Every lattice vertex is split into an `in`/`out` pair joined by a
//! capacity-1 arc, so a flow of value `n` from the sources to the labels is
//! exactly a family of `n` vertex-disjoint source-to-label paths (Menger).

use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::Lattice;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u8,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `from -> to` with capacity `cap` and its residual twin; returns
    /// the forward arc id.
    pub fn link(&mut self, from: usize, to: usize, cap: u8) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    /// Flow pushed through the forward arc `id`.
    pub fn flow(&self, id: usize) -> u8 {
        self.arcs[id + 1].cap
    }

    fn augment(&mut self, u: usize, sink: usize, seen: &mut [bool]) -> bool {
        if u == sink {
            return true;
        }
        seen[u] = true;
        for k in 0..self.adj[u].len() {
            let id = self.adj[u][k];
            let Arc { to, cap } = self.arcs[id];
            if cap > 0 && !seen[to] && self.augment(to, sink, seen) {
                self.arcs[id].cap -= 1;
                self.arcs[id ^ 1].cap += 1;
                return true;
            }
        }
        false
    }

    /// Ford-Fulkerson with DFS augmenting paths; returns the flow value.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let mut total = 0;
        loop {
            let mut seen = vec![false; self.adj.len()];
            if !self.augment(source, sink, &mut seen) {
                return total;
            }
            total += 1;
        }
    }
}

/// `n` vertex-disjoint paths from the sources to `labels`, one per source in
/// source order, each listed as vertex indices from source to label.
pub fn disjoint_paths(lat: &Lattice, labels: &[usize]) -> Option<Vec<Vec<usize>>> {
    let n = lat.length();
    let count = lat.vertex_count();
    let (s, t) = (0, 1);
    let vin = |v: usize| 2 * v;
    let vout = |v: usize| 2 * v + 1;
    let mut net = FlowNetwork::new(2 * count + 2);

    // index 0 is unused; vertices are numbered from 1
    let through: Vec<usize> = core::iter::once(0)
        .chain((1..=count).map(|v| net.link(vin(v), vout(v), 1)))
        .collect();
    for src in 1..=n {
        net.link(s, vin(src), 1);
    }
    // arcs into each head, remembered to walk the flow afterwards
    let mut down: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count + 1];
    for head in n + 1..=count {
        let (l, r) = lat.parent_indices(head);
        for p in [l, r].into_iter().flatten() {
            let id = net.link(vout(p), vin(head), 1);
            down[p].push((id, head));
        }
    }
    for &label in labels {
        net.link(vout(label), t, 1);
    }

    if net.max_flow(s, t) < n {
        return None;
    }

    let is_label = |v: usize| labels.contains(&v);
    let mut paths = Vec::with_capacity(n);
    for src in 1..=n {
        let mut path = vec![src];
        let mut v = src;
        while !is_label(v) {
            let (_, next) = *down[v].iter().find(|&&(id, _)| net.flow(id) == 1)?;
            path.push(next);
            v = next;
        }
        debug_assert_eq!(net.flow(through[v]), 1);
        paths.push(path);
    }
    Some(paths)
}
